#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "windward/error.hpp"

namespace windward::detail {

/// Shortest round-trip decimal form of a double. Stable byte-for-byte for
/// a given value, so serialized files are reproducible.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

/// Locale-independent double parse of one full token. Throws
/// InvalidInputError if the token is empty, has trailing characters, or is
/// not a number.
inline double parse_double(std::string_view token) {
  double out = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (token.empty()) throw InvalidInputError("empty number");
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) {
    throw InvalidInputError("not a number: '" + std::string(token) + "'");
  }
  return out;
}

inline std::string trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n";
  while (!s.empty() && kSpace.find(s.front()) != std::string_view::npos) {
    s.remove_prefix(1);
  }
  while (!s.empty() && kSpace.find(s.back()) != std::string_view::npos) {
    s.remove_suffix(1);
  }
  return std::string(s);
}

}  // namespace windward::detail
