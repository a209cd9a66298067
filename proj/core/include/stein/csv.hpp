#pragma once

#include <cstdio>
#include <string>

namespace stein {

/// Round-trippable, locale-independent formatting for CSV cells.
inline std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace stein
