// Compiled with -mavx2; only reached through avx2_table() after a CPU check.

#include "dyadic/simd/kernels.hpp"
#include "neumaier.hpp"

#include <immintrin.h>

namespace dyadic::simd {
namespace {

// Four independent Neumaier accumulators, one per lane.
struct Lanes {
  __m256d s = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();

  void add(__m256d x) noexcept {
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    const __m256d t = _mm256_add_pd(s, x);
    const __m256d s_ge_x =
        _mm256_cmp_pd(_mm256_and_pd(s, abs_mask), _mm256_and_pd(x, abs_mask), _CMP_GE_OQ);
    const __m256d big = _mm256_blendv_pd(x, s, s_ge_x);
    const __m256d small = _mm256_blendv_pd(s, x, s_ge_x);
    c = _mm256_add_pd(c, _mm256_add_pd(_mm256_sub_pd(big, t), small));
    s = t;
  }

  void fold_into(detail::Neumaier& acc) const noexcept {
    alignas(32) double ss[4];
    alignas(32) double cc[4];
    _mm256_store_pd(ss, s);
    _mm256_store_pd(cc, c);
    for (double v : ss) acc.add(v);
    for (double v : cc) acc.add(v);
  }
};

double sum_avx2(const double* x, std::size_t n) {
  Lanes lanes;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) lanes.add(_mm256_loadu_pd(x + i));
  detail::Neumaier acc;
  lanes.fold_into(acc);
  for (; i < n; ++i) acc.add(x[i]);
  return acc.value();
}

double dot2_avx2(const double* a, const double* b, std::size_t n) {
  Lanes lanes;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lanes.add(_mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  detail::Neumaier acc;
  lanes.fold_into(acc);
  for (; i < n; ++i) acc.add(a[i] * b[i]);
  return acc.value();
}

double dot3_avx2(const double* a, const double* b, const double* c, std::size_t n) {
  Lanes lanes;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    lanes.add(_mm256_mul_pd(ab, _mm256_loadu_pd(c + i)));
  }
  detail::Neumaier acc;
  lanes.fold_into(acc);
  for (; i < n; ++i) acc.add(a[i] * b[i] * c[i]);
  return acc.value();
}

void add_squares_avx2(double* acc, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_mul_pd(v, v)));
  }
  for (; i < n; ++i) acc[i] += x[i] * x[i];
}

void mul_avx2(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void axpy_avx2(double* y, double alpha, const double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

namespace detail {
extern constinit const KernelTable kAvx2{"avx2",         sum_avx2, dot2_avx2, dot3_avx2,
                                  add_squares_avx2, mul_avx2, axpy_avx2};
}  // namespace detail

}  // namespace dyadic::simd
