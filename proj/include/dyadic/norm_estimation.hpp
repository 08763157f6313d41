#pragma once
// Lower bounds for ||Lambda|| = sup Lambda(f, g) / (||f||_{L^p(sigma; l^2)} ||g||_{L^{p'}(omega)})
// by alternating maximisation, plus two independent oracles: the top
// singular value at p = 2 and a dense direction search for tiny instances.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dyadic/testing.hpp"

namespace dyadic {

// The ratio Lambda(f, g) / (||f|| ||g||); 0 when either norm vanishes.
double form_ratio(const Instance& inst, const ScaleFunction& f, const AtomFunction& g);

struct FHalfStep {
  ScaleFunction f;          // unit norm, zero when degenerate
  bool degenerate = false;  // T^omega g vanishes
};

struct GHalfStep {
  AtomFunction g;
  bool degenerate = false;  // T^sigma f vanishes
};

// Unit-norm f maximising Lambda(f, g) for fixed g.
FHalfStep best_f_given_g(const Instance& inst, const AtomFunction& g);
// Unit-norm g maximising Lambda(f, g) for fixed f.
GHalfStep best_g_given_f(const Instance& inst, const ScaleFunction& f);

struct NormOptions {
  int restarts = 32;       // random starts on top of the given seeds
  double tol = 1e-10;      // relative gain below which a start stops
  int max_iter = 1000;     // full f/g sweeps per start
  std::uint64_t seed = 0;
};

struct NormEstimate {
  double value = 0.0;
  ScaleFunction witness_f;
  AtomFunction witness_g;
  int iterations = 0;       // total sweeps over all starts
  int restarts = 0;         // starts that were run
  bool converged = true;    // every start met the tolerance before max_iter
  bool monotone = true;     // no half-step lowered the ratio beyond rounding
  bool degenerate = false;  // every start was degenerate
  std::optional<double> oracle_value;
  std::string oracle_kind;  // "spectral", "grid" or empty
};

using SeedPair = std::pair<ScaleFunction, AtomFunction>;

// (phi_Q*, witness) from T, (witness, 1_Q**) from Tstar, and the constants.
std::vector<SeedPair> default_seeds(const Instance& inst, const TestingReport& testing);

// Runs every seed and options.restarts random starts. The value is the
// ratio of the returned witnesses, recomputed after the search.
NormEstimate alternating_maximization(const Instance& inst, const std::vector<SeedPair>& seeds,
                                      const NormOptions& options);

// alternating_maximization from default_seeds.
NormEstimate estimate_norm(const Instance& inst, const NormOptions& options = {});
NormEstimate estimate_norm(const Instance& inst, const TestingReport& testing, const NormOptions& options);

// Top singular value of the nonnegative matrix representing Lambda at p = 2,
// by power iteration. Throws DomainError unless p = 2.
double spectral_oracle_p2(const Instance& inst);

// Number of unknowns of the dense search: cells plus atoms.
std::size_t grid_dof(const Instance& inst);

// Dense search over nonnegative directions (compositions of `resolution`
// on each simplex) followed by pattern refinement. Throws SizeLimitError
// when grid_dof exceeds 6.
double grid_oracle(const Instance& inst, int resolution);

struct TheoremRatio {
  double lower = 0.0;  // max(T, Tstar) / ||Lambda||_est
  double upper = 0.0;  // ||Lambda||_est / (T + Tstar)
  bool degenerate = false;
};

// Throws DomainError for p < 2. `degenerate` when T + Tstar or the estimate
// vanishes; the ratios are then 0.
TheoremRatio theorem_ratio(const Instance& inst, double T, double Tstar, double norm_estimate);

}  // namespace dyadic
