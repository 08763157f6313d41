#include "dyadic/simd/kernels.hpp"
#include "neumaier.hpp"

namespace dyadic::simd {
namespace {

double sum_scalar(const double* x, std::size_t n) {
  detail::Neumaier acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(x[i]);
  return acc.value();
}

double dot2_scalar(const double* a, const double* b, std::size_t n) {
  detail::Neumaier acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(a[i] * b[i]);
  return acc.value();
}

double dot3_scalar(const double* a, const double* b, const double* c, std::size_t n) {
  detail::Neumaier acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(a[i] * b[i] * c[i]);
  return acc.value();
}

void add_squares_scalar(double* acc, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += x[i] * x[i];
}

void mul_scalar(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void axpy_scalar(double* y, double alpha, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

constexpr KernelTable kScalar{"scalar",         sum_scalar, dot2_scalar, dot3_scalar,
                              add_squares_scalar, mul_scalar, axpy_scalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace dyadic::simd
