#pragma once
// Seeded random instances, the hand-checked worked instances and a few
// adversarial families.

#include <cstdint>
#include <string>
#include <vector>

#include "dyadic/embedding.hpp"
#include "dyadic/rng.hpp"

namespace dyadic {

struct Range {
  double lo = 0.1;
  double hi = 10.0;
};

struct GenSpec {
  std::uint64_t seed = 0;
  int dimension = 1;
  int depth = 2;
  double p = 2.0;
  Range weight{0.1, 10.0};   // log-uniform masses of sigma and omega atoms
  double sparsity = 0.0;     // probability that any generated value is 0
  Range mu{0.1, 10.0};
  double mu_sparsity = 0.0;  // extra probability that a mu cell is 0
  Range lambda{0.1, 10.0};
  double lambda_sparsity = 0.0;

  // Throws PreconditionError for empty or nonpositive ranges and
  // probabilities outside [0, 1].
  void validate() const;
};

// Deterministic in the spec; each field draws from its own sub-stream.
Instance generate(const GenSpec& spec);

Instance worked_w1();
Instance worked_w2();
Instance worked_w3();

// f = 1 on the two cells of atom 0 of W3, and the partition into those cells.
struct DisjointFixture {
  ScaleFunction f;
  std::vector<std::vector<Cell>> partition;
};
DisjointFixture w3_fixture();

struct AdversarialParams {
  std::uint64_t seed = 0;
  int dimension = 1;
  int depth = 3;
  double p = 2.0;
  int count = 4;
  double theta = 1.0;  // decay exponent of the lacunary family
};

// kind: "point-mass-sigma", "single-scale-mu", "lacunary-lambda" or
// "deep-chain". Throws PreconditionError for an unknown kind.
std::vector<Instance> adversarial_family(const std::string& kind, const AdversarialParams& params);

// For deep-chain instances: f is a unit spike on one finest cell plus a
// small background, g a unit spike on one atom plus a small background.
// The spike location is drawn from `rng`.
ScaleFunction deep_chain_f(const DyadicSystem& sys, Rng& rng);
AtomFunction deep_chain_g(const DyadicSystem& sys, Rng& rng);

// Random test functions and data with log-uniform entries in [lo, hi];
// each entry is 0 with probability `zero_prob`.
ScaleFunction random_scale_function(const DyadicSystem& sys, Rng& rng, Range r = {1e-3, 1.0},
                                    double zero_prob = 0.0);
AtomFunction random_atom_function(const DyadicSystem& sys, Rng& rng, Range r = {1e-3, 1.0},
                                  double zero_prob = 0.0);
CarlesonData random_carleson_data(const DyadicSystem& sys, Rng& rng, double zero_prob = 0.0);

// A random partition of the cells into at most `parts` sets; cells are
// left out with probability `drop`.
std::vector<std::vector<Cell>> random_partition(const DyadicSystem& sys, Rng& rng, int parts, double drop = 0.0);

}  // namespace dyadic
