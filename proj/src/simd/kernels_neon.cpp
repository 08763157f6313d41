// aarch64 only; NEON is part of the base ISA there, no extra flags needed.

#include "dyadic/simd/kernels.hpp"
#include "neumaier.hpp"

#include <arm_neon.h>

namespace dyadic::simd {
namespace {

struct Lanes {
  float64x2_t s = vdupq_n_f64(0.0);
  float64x2_t c = vdupq_n_f64(0.0);

  void add(float64x2_t x) noexcept {
    const float64x2_t t = vaddq_f64(s, x);
    const uint64x2_t s_ge_x = vcgeq_f64(vabsq_f64(s), vabsq_f64(x));
    const float64x2_t big = vbslq_f64(s_ge_x, s, x);
    const float64x2_t small = vbslq_f64(s_ge_x, x, s);
    c = vaddq_f64(c, vaddq_f64(vsubq_f64(big, t), small));
    s = t;
  }

  void fold_into(detail::Neumaier& acc) const noexcept {
    acc.add(vgetq_lane_f64(s, 0));
    acc.add(vgetq_lane_f64(s, 1));
    acc.add(vgetq_lane_f64(c, 0));
    acc.add(vgetq_lane_f64(c, 1));
  }
};

double sum_neon(const double* x, std::size_t n) {
  Lanes lanes;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) lanes.add(vld1q_f64(x + i));
  detail::Neumaier acc;
  lanes.fold_into(acc);
  for (; i < n; ++i) acc.add(x[i]);
  return acc.value();
}

double dot2_neon(const double* a, const double* b, std::size_t n) {
  Lanes lanes;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) lanes.add(vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  detail::Neumaier acc;
  lanes.fold_into(acc);
  for (; i < n; ++i) acc.add(a[i] * b[i]);
  return acc.value();
}

double dot3_neon(const double* a, const double* b, const double* c, std::size_t n) {
  Lanes lanes;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t ab = vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    lanes.add(vmulq_f64(ab, vld1q_f64(c + i)));
  }
  detail::Neumaier acc;
  lanes.fold_into(acc);
  for (; i < n; ++i) acc.add(a[i] * b[i] * c[i]);
  return acc.value();
}

void add_squares_neon(double* acc, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vmulq_f64(v, v)));
  }
  for (; i < n; ++i) acc[i] += x[i] * x[i];
}

void mul_neon(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void axpy_neon(double* y, double alpha, const double* x, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

namespace detail {
extern constinit const KernelTable kNeon{"neon",         sum_neon, dot2_neon, dot3_neon,
                                  add_squares_neon, mul_neon, axpy_neon};
}  // namespace detail

}  // namespace dyadic::simd
