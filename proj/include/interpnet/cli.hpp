#pragma once

#include <iosfwd>

namespace interpnet {

/// Entry point of the `interpnet` command line tool. Returns the process exit
/// code: 0 success, 1 usage, 2 data error, 3 construction error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace interpnet
