#include "dyadic/instance_gen.hpp"

#include <cmath>

#include "dyadic/errors.hpp"

namespace dyadic {

namespace {

enum Stream : std::uint64_t { kSigma = 1, kOmega = 2, kMu = 3, kLambda = 4 };

bool valid_range(Range r) { return r.lo > 0.0 && r.hi >= r.lo && std::isfinite(r.hi); }
bool valid_prob(double q) { return q >= 0.0 && q <= 1.0; }

// Two draws per value, so the zero pattern never shifts later values.
double draw(Rng& rng, Range r, double zero_prob) {
  const bool zero = rng.bernoulli(zero_prob);
  const double v = rng.log_uniform(r.lo, r.hi);
  return zero ? 0.0 : v;
}

double combine(double a, double b) { return 1.0 - (1.0 - a) * (1.0 - b); }

}  // namespace

void GenSpec::validate() const {
  if (!valid_range(weight) || !valid_range(mu) || !valid_range(lambda)) {
    throw PreconditionError("generator ranges must satisfy 0 < lo <= hi < inf");
  }
  if (!valid_prob(sparsity) || !valid_prob(mu_sparsity) || !valid_prob(lambda_sparsity)) {
    throw PreconditionError("generator probabilities must lie in [0, 1]");
  }
}

Instance generate(const GenSpec& spec) {
  spec.validate();
  DyadicSystem sys(spec.dimension, spec.depth);
  const Rng root(spec.seed);

  Rng rs = root.substream(kSigma);
  Weights sigma(sys.num_atoms());
  for (double& v : sigma.values()) v = draw(rs, spec.weight, spec.sparsity);

  Rng ro = root.substream(kOmega);
  Weights omega(sys.num_atoms());
  for (double& v : omega.values()) v = draw(ro, spec.weight, spec.sparsity);

  Rng rm = root.substream(kMu);
  ScaleFunction mu = ScaleFunction::zeros(sys);
  const double mu_zero = combine(spec.sparsity, spec.mu_sparsity);
  for (double& v : mu.values()) v = draw(rm, spec.mu, mu_zero);

  Rng rl = root.substream(kLambda);
  std::vector<double> lambda(sys.num_cubes());
  const double lambda_zero = combine(spec.sparsity, spec.lambda_sparsity);
  for (double& v : lambda) v = draw(rl, spec.lambda, lambda_zero);

  return make_instance(std::move(sys), spec.p, std::move(sigma), std::move(omega), std::move(mu),
                       std::move(lambda));
}

namespace {

Instance single_root_instance(int depth, double p, std::vector<double> sigma, std::vector<double> omega,
                              double mu) {
  DyadicSystem sys(1, depth);
  std::vector<double> lambda(sys.num_cubes(), 0.0);
  lambda[0] = 1.0;
  ScaleFunction m = ScaleFunction::constant(sys, mu);
  return make_instance(std::move(sys), p, Weights(std::move(sigma)), Weights(std::move(omega)), std::move(m),
                       std::move(lambda));
}

}  // namespace

Instance worked_w1() { return single_root_instance(1, 2.0, {1.0, 1.0}, {1.0, 1.0}, 1.0); }
Instance worked_w2() { return single_root_instance(0, 4.0, {1.0}, {1.0}, 8.0); }
Instance worked_w3() { return single_root_instance(1, 1.5, {1.0, 0.0}, {1.0, 1.0}, 1.0); }

DisjointFixture w3_fixture() {
  const Instance w3 = worked_w3();
  DisjointFixture fx;
  fx.f = ScaleFunction::zeros(w3.sys);
  fx.f(0, 0) = 1.0;
  fx.f(0, 1) = 1.0;
  fx.partition = {{Cell{0, 0}}, {Cell{0, 1}}};
  return fx;
}

ScaleFunction random_scale_function(const DyadicSystem& sys, Rng& rng, Range r, double zero_prob) {
  ScaleFunction f = ScaleFunction::zeros(sys);
  for (double& v : f.values()) v = draw(rng, r, zero_prob);
  return f;
}

AtomFunction random_atom_function(const DyadicSystem& sys, Rng& rng, Range r, double zero_prob) {
  AtomFunction g(sys.num_atoms());
  for (double& v : g.values()) v = draw(rng, r, zero_prob);
  return g;
}

CarlesonData random_carleson_data(const DyadicSystem& sys, Rng& rng, double zero_prob) {
  CarlesonData data;
  data.a.resize(sys.num_cubes());
  for (double& v : data.a) v = draw(rng, Range{1e-2, 1.0}, zero_prob);
  data.nu = Weights(sys.num_atoms());
  for (double& v : data.nu.values()) v = draw(rng, Range{0.1, 10.0}, zero_prob);
  return data;
}

std::vector<std::vector<Cell>> random_partition(const DyadicSystem& sys, Rng& rng, int parts, double drop) {
  if (parts < 1) throw PreconditionError("a partition needs at least one set");
  std::vector<std::vector<Cell>> out(static_cast<std::size_t>(parts));
  for (int j = 0; j <= sys.depth(); ++j) {
    for (std::size_t a = 0; a < sys.num_atoms(); ++a) {
      const bool dropped = rng.bernoulli(drop);
      const auto k = rng.below(static_cast<std::uint64_t>(parts));
      if (!dropped) out[k].push_back(Cell{a, j});
    }
  }
  return out;
}

ScaleFunction deep_chain_f(const DyadicSystem& sys, Rng& rng) {
  ScaleFunction f = random_scale_function(sys, rng, Range{1e-6, 1e-5});
  f(rng.below(sys.num_atoms()), sys.depth()) += 1.0;
  return f;
}

AtomFunction deep_chain_g(const DyadicSystem& sys, Rng& rng) {
  AtomFunction g = random_atom_function(sys, rng, Range{1e-6, 1e-5});
  g[rng.below(sys.num_atoms())] += 1.0;
  return g;
}

std::vector<Instance> adversarial_family(const std::string& kind, const AdversarialParams& params) {
  if (kind != "point-mass-sigma" && kind != "single-scale-mu" && kind != "lacunary-lambda" &&
      kind != "deep-chain") {
    throw PreconditionError("unknown adversarial family: " + kind);
  }
  std::vector<Instance> out;
  const Rng root(params.seed);
  for (int i = 0; i < params.count; ++i) {
    GenSpec spec;
    spec.seed = root.substream(static_cast<std::uint64_t>(i)).next_u64();
    spec.dimension = params.dimension;
    spec.depth = params.depth;
    spec.p = params.p;
    Instance inst = generate(spec);
    const auto& sys = inst.sys;
    Rng rng = root.substream(0x100000000ULL + static_cast<std::uint64_t>(i));

    if (kind == "point-mass-sigma") {
      const auto atom = rng.below(sys.num_atoms());
      const double m = rng.log_uniform(0.1, 10.0);
      for (double& v : inst.sigma.values()) v = 0.0;
      inst.sigma[atom] = m;
    } else if (kind == "single-scale-mu") {
      const int level = i % sys.num_levels();
      for (int j = 0; j <= sys.depth(); ++j) {
        if (j == level) continue;
        for (double& v : inst.mu.level(j)) v = 0.0;
      }
    } else if (kind == "lacunary-lambda") {
      const auto leaf = rng.below(sys.num_atoms());
      std::fill(inst.lambda.begin(), inst.lambda.end(), 0.0);
      for (int j = 0; j <= sys.depth(); ++j) {
        inst.lambda[sys.ordinal(sys.ancestor(leaf, j))] = std::exp2(-j * params.theta);
      }
    } else {
      // Unit sigma and mu make the F-type ratios depend only on box sizes,
      // so a spike in f forces a chain of stopping cubes; unit omega does
      // the same for a spike in g.
      for (double& v : inst.sigma.values()) v = 1.0;
      for (double& v : inst.omega.values()) v = 1.0;
      for (double& v : inst.mu.values()) v = 1.0;
    }
    validate(inst);
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace dyadic
