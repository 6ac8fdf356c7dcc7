#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace rtgq::detail {

// Shortest round-trip decimal form, independent of the C locale.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// JSON has no NaN/Inf.
inline std::string json_number(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

}  // namespace rtgq::detail
