#pragma once

#include <string>

namespace interpnet {

/// Shortest decimal text that parses back to exactly `v`. Locale independent,
/// so reports are byte-identical across runs and machines.
std::string format_number(double v);

}  // namespace interpnet
