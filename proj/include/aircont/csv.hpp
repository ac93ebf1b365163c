#ifndef AIRCONT_CSV_HPP
#define AIRCONT_CSV_HPP

#include <cstdio>
#include <string>

namespace aircont {

/// Formats a real with 9 significant digits, locale-independent. Negative
/// zero is canonicalized so output bytes do not depend on how a zero was
/// produced.
inline std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v + 0.0);
  return buf;
}

}  // namespace aircont

#endif  // AIRCONT_CSV_HPP
