#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace backflow::detail {

/// Shortest round-trip decimal form.
inline void append_number(std::string& out, double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec == std::errc()) out.append(buf, end);
}

}  // namespace backflow::detail
