#pragma once

#include <charconv>
#include <string>

namespace hslo {

/// Shortest decimal text that reads back as exactly `v`.
inline std::string format_number(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

}  // namespace hslo
