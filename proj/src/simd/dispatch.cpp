#include "dyadic/simd/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace dyadic::simd {

namespace detail {
#ifdef DYADIC_HAVE_AVX2_KERNELS
extern const KernelTable kAvx2;
#endif
#ifdef DYADIC_HAVE_NEON_KERNELS
extern const KernelTable kNeon;
#endif
}  // namespace detail

const KernelTable* avx2_table() noexcept {
#ifdef DYADIC_HAVE_AVX2_KERNELS
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &detail::kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_table() noexcept {
#ifdef DYADIC_HAVE_NEON_KERNELS
  return &detail::kNeon;
#else
  return nullptr;
#endif
}

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> out{&scalar_table()};
  if (const auto* t = avx2_table()) out.push_back(t);
  if (const auto* t = neon_table()) out.push_back(t);
  return out;
}

namespace {

const KernelTable& choose() noexcept {
  const char* env = std::getenv("DYADIC_SIMD");
  const std::string_view want = env ? env : "auto";
  if (want == "scalar") return scalar_table();
  if (want == "avx2") return avx2_table() ? *avx2_table() : scalar_table();
  if (want == "neon") return neon_table() ? *neon_table() : scalar_table();
  if (const auto* t = avx2_table()) return *t;
  if (const auto* t = neon_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& table = choose();
  return table;
}

}  // namespace dyadic::simd
