#pragma once
// Data-parallel inner loops shared by the measure, form and oracle code.
//
// Every kernel has a scalar reference implementation; AVX2 (x86-64) and NEON
// (aarch64) variants are compiled when available and one table is selected at
// first use from the CPU features. DYADIC_SIMD=scalar|avx2|neon in the
// environment overrides the choice (an unavailable request falls back to the
// scalar table). Reductions use Neumaier-compensated summation in every
// variant, so tables agree to a few ulps but are not bit-identical.

#include <cstddef>
#include <span>
#include <vector>

namespace dyadic::simd {

struct KernelTable {
  const char* name;
  // sum_i x[i]
  double (*sum)(const double* x, std::size_t n);
  // sum_i a[i] * b[i]
  double (*dot2)(const double* a, const double* b, std::size_t n);
  // sum_i a[i] * b[i] * c[i]
  double (*dot3)(const double* a, const double* b, const double* c, std::size_t n);
  // acc[i] += x[i] * x[i]
  void (*add_squares)(double* acc, const double* x, std::size_t n);
  // out[i] = a[i] * b[i]
  void (*mul)(double* out, const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double* y, double alpha, const double* x, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;

// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available_tables();

// The table chosen for this process.
const KernelTable& active() noexcept;

inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot2(a.data(), b.data(), a.size());
}

inline double dot(std::span<const double> a, std::span<const double> b,
                  std::span<const double> c) {
  return active().dot3(a.data(), b.data(), c.data(), a.size());
}

inline void add_squares(std::span<double> acc, std::span<const double> x) {
  active().add_squares(acc.data(), x.data(), acc.size());
}

inline void mul(std::span<double> out, std::span<const double> a, std::span<const double> b) {
  active().mul(out.data(), a.data(), b.data(), out.size());
}

inline void axpy(std::span<double> y, double alpha, std::span<const double> x) {
  active().axpy(y.data(), alpha, x.data(), y.size());
}

}  // namespace dyadic::simd
