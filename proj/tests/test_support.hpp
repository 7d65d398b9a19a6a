#pragma once

#include <doctest.h>

#include <cmath>
#include <cstdio>

// |lhs - value| <= rel*|value| + abs comparison; the vendored doctest Approx
// only supports relative tolerances.
namespace testsup {

struct Near {
  double value;
  double rel;
  double abs;
};

inline Near near(double value, double abs_tol) { return {value, 0.0, abs_tol}; }
inline Near near(double value, double rel_tol, double abs_tol) {
  return {value, rel_tol, abs_tol};
}

inline bool operator==(double lhs, const Near& rhs) {
  return std::fabs(lhs - rhs.value) <=
         rhs.rel * std::fabs(rhs.value) + rhs.abs;
}
inline bool operator==(const Near& lhs, double rhs) { return rhs == lhs; }
inline bool operator!=(double lhs, const Near& rhs) { return !(lhs == rhs); }

inline doctest::String toString(const Near& n) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "Near(%.17g, rel=%g, abs=%g)", n.value,
                n.rel, n.abs);
  return buf;
}

}  // namespace testsup

using testsup::near;
