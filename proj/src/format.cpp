#include "interpnet/format.hpp"

#include <array>
#include <charconv>

namespace interpnet {

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

}  // namespace interpnet
