#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace dirinv::detail {

// Shortest round-trippable decimal form, locale-independent ('.' separator).
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void append_double(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace dirinv::detail
