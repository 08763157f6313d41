#pragma once
// Counter-mode SplitMix64 ("splitmix64-ctr-v1").
//
// Draw k of a stream with key s is mix(s + k * golden). Sub-streams are
// keyed by mixing the parent key with a label, so any number of independent
// streams can be derived from one 64-bit seed without depending on the
// order in which they are consumed. The standard library distributions are
// not used because their output is implementation-defined.

#include <cmath>
#include <cstdint>

namespace dyadic {

class Rng {
 public:
  static constexpr const char* kAlgorithm = "splitmix64-ctr-v1";

  explicit constexpr Rng(std::uint64_t seed) noexcept : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  constexpr std::uint64_t next_u64() noexcept {
    ++counter_;
    return mix(key_ + counter_ * kGolden);
  }

  // Uniform in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  // exp of a uniform draw between log(lo) and log(hi); lo, hi > 0.
  double log_uniform(double lo, double hi) noexcept {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  bool bernoulli(double prob) noexcept { return uniform() < prob; }

  // Uniform in [0, n) for 0 < n < 2^53.
  std::uint64_t below(std::uint64_t n) noexcept {
    const auto k = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }

  constexpr Rng substream(std::uint64_t label) const noexcept {
    Rng r(0);
    r.key_ = mix(key_ ^ mix(label + 0x243f6a8885a308d3ULL));
    return r;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace dyadic
