#pragma once

#include <cstdio>
#include <string>

namespace dampedwave::detail {

/// Shortest round-trip formatting, locale-free, for byte-stable CSV/JSON.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace dampedwave::detail
