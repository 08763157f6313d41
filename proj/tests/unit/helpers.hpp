#pragma once

#include <cmath>
#include <cstdint>

#include "dyadic/instance_gen.hpp"
#include "dyadic/numeric.hpp"

namespace test {

inline bool near(double a, double b, double rel) { return dyadic::relative_difference(a, b) <= rel; }

// Property-test instance source: seeded, spread over dimensions and depths
// small enough for the brute-force oracles.
inline dyadic::Instance small_instance(std::uint64_t seed, double p = 2.0, int max_depth = 3,
                                       double sparsity = 0.1) {
  dyadic::Rng rng(seed);
  dyadic::GenSpec spec;
  spec.seed = rng.next_u64();
  spec.dimension = 1 + static_cast<int>(rng.below(2));
  spec.depth = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.dimension == 1 ? max_depth + 1 : 3)));
  spec.p = p;
  spec.sparsity = sparsity;
  return dyadic::generate(spec);
}

inline dyadic::Instance with_lambda(dyadic::Instance inst, const std::vector<std::pair<const char*, double>>& values) {
  std::fill(inst.lambda.begin(), inst.lambda.end(), 0.0);
  for (const auto& [path, v] : values) inst.lambda[inst.sys.ordinal(inst.sys.cube_from_path(path))] = v;
  return inst;
}

}  // namespace test
