#pragma once

#include <cstdio>
#include <string>

namespace cograsp {

// Shortest-field %g formatting at a fixed significant-digit budget. 17 digits
// round-trips IEEE doubles exactly; 9 is the compact form used in plot CSVs.
inline std::string format_real(double value, int sig_digits = 17) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", sig_digits, value);
  return buf;
}

}  // namespace cograsp
