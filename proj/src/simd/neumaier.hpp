#pragma once

#include <cmath>

namespace dyadic::simd::detail {

// Scalar Neumaier accumulator; also used to fold SIMD lanes.
struct Neumaier {
  double s = 0.0;
  double c = 0.0;

  void add(double x) noexcept {
    const double t = s + x;
    if (std::fabs(s) >= std::fabs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }

  double value() const noexcept { return s + c; }
};

}  // namespace dyadic::simd::detail
