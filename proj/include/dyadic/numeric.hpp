#pragma once

#include <algorithm>
#include <cmath>

namespace dyadic {

// |a - b| / max(|a|, |b|), and 0 when both vanish.
inline double relative_difference(double a, double b) noexcept {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  if (scale == 0.0) return 0.0;
  return std::fabs(a - b) / scale;
}

}  // namespace dyadic
