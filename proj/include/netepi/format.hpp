#pragma once

#include <charconv>
#include <string>

namespace netepi {

// Shortest round-trippable decimal form; identical bytes for identical
// doubles, which the output-determinism contract relies on.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace netepi
