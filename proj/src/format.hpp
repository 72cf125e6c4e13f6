#pragma once

#include <cstdio>
#include <string>

namespace segloss::detail {

// 17 significant digits round-trips any double exactly; the fixed format
// keeps every writer byte-deterministic.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace segloss::detail
