// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dyadic/embedding.hpp"
#include "dyadic/numeric.hpp"
#include "dyadic/suite.hpp"

using namespace dyadic;

namespace {

// Tolerances.
constexpr double kPhiChainTol = 1e-10;
constexpr double kExactTol = 1e-12;   // "exact" bounds and identities
constexpr double kTheoremTol = 1e-9;
constexpr double kSpectralTol = 1e-6;
constexpr double kGridTol = 1e-2;
constexpr double kStability = 4.0;    // max/min of per-depth maxima
constexpr double kPhiChainSeconds = 30.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double rel(double a, double b) { return relative_difference(a, b); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Instance random_instance(std::uint64_t seed, int dimension, int depth, double p, double sparsity) {
  GenSpec spec;
  spec.seed = seed;
  spec.dimension = dimension;
  spec.depth = depth;
  spec.p = p;
  spec.sparsity = sparsity;
  return generate(spec);
}

// max / min over the entries of a per-depth table of maxima.
double spread(const std::map<int, double>& per_depth) {
  double lo = INFINITY;
  double hi = 0.0;
  for (const auto& [d, v] : per_depth) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return lo > 0.0 ? hi / lo : INFINITY;
}

std::string table(const std::map<int, double>& per_depth) {
  std::string s;
  for (const auto& [d, v] : per_depth) s += (s.empty() ? "" : " ") + std::string("d") + std::to_string(d) + "=" + fmt(v);
  return s;
}

Outcome phi_chain() {
  const auto start = std::chrono::steady_clock::now();
  const std::array<double, 4> ps{2.0, 2.5, 3.0, 4.0};
  double worst = 0.0;
  std::size_t cubes = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    const Instance in = random_instance(1000 + i, 1, static_cast<int>(i % 5), ps[i % 4], 0.1);
    for (const CubeId q : in.sys.cubes()) {
      worst = std::max(worst, phi_identity_check(in, q).max_relative_spread());
      ++cubes;
    }
  }
  const PhiIdentity w1 = phi_identity_check(worked_w1(), CubeId{});
  const PhiIdentity w2 = phi_identity_check(worked_w2(), CubeId{});
  const double worked = std::max({rel(w1.pairing, 4.0), rel(w1.phi_norm, 4.0), rel(w2.pairing, 16.0),
                                  rel(w2.slice, 16.0), rel(w2.dual_norm, 16.0), rel(w2.phi_norm, 16.0),
                                  w1.max_relative_spread()});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= kPhiChainTol && worked <= kPhiChainTol && secs <= kPhiChainSeconds,
          std::to_string(cubes) + " cubes, max spread " + fmt(worst) + ", worked " + fmt(worked) + ", " +
              fmt(secs) + " s"};
}

Outcome disjointness() {
  std::size_t failures = 0;
  for (const double p : {2.0, 3.0, 4.0}) {
    for (std::uint64_t i = 0; i < 1000; ++i) {
      Rng rng(Rng(static_cast<std::uint64_t>(p)).substream(i).next_u64());
      const DyadicSystem sys(1, static_cast<int>(rng.below(5)));
      const AtomFunction s = random_atom_function(sys, rng, Range{0.1, 10.0}, 0.1);
      const Weights sigma(std::vector<double>(s.values().begin(), s.values().end()));
      const ScaleFunction f = random_scale_function(sys, rng, Range{1e-3, 1.0}, 0.2);
      const auto part = random_partition(sys, rng, 1 + static_cast<int>(rng.below(6)), 0.2);
      failures += !lemma_disjoint_check(f, sigma, p, part).holds;
    }
  }
  const DisjointFixture fx = w3_fixture();
  const DisjointCheck w3 = lemma_disjoint_check(fx.f, worked_w3().sigma, 1.5, fx.partition);
  const bool fixture = !w3.holds && rel(w3.lhs, 2.0) <= kExactTol && rel(w3.rhs, std::pow(2.0, 0.75)) <= kExactTol;
  return {failures == 0 && fixture, "3000 draws, " + std::to_string(failures) + " violations; W3 lhs " +
                                        fmt(w3.lhs) + " rhs " + fmt(w3.rhs)};
}

Outcome stopping_structure() {
  double g_max = 0.0;
  double sparse_max = 0.0;
  double geometric_max = 0.0;
  std::size_t broken = 0;
  for (const double p : {2.0, 3.0, 4.0}) {
    for (std::uint64_t i = 0; i < 200; ++i) {
      const Instance in = random_instance(5000 + i * 3 + static_cast<std::uint64_t>(p), 1, static_cast<int>(i % 6), p, 0.1);
      Rng rng(i);
      const ScaleFunction f = (i % 3 == 0) ? deep_chain_f(in.sys, rng) : random_scale_function(in.sys, rng, Range{1e-4, 1.0}, 0.2);
      const AtomFunction g = (i % 3 == 0) ? deep_chain_g(in.sys, rng) : random_atom_function(in.sys, rng, Range{1e-4, 1.0}, 0.2);
      const StoppingFamily gf = build_G_family(in, in.sys.root(), g);
      const StoppingFamily ff = build_F_family(in, in.sys.root(), f);
      broken += !check_structure(in.sys, gf).empty() || !check_structure(in.sys, ff).empty();
      broken += g_stopping_violations(in, g, gf) + f_stopping_violations(in, f, ff);
      const CarlesonConstant c = carleson_constant(in.sys, gf, in.omega);
      if (c.infinite) ++broken;
      g_max = std::max(g_max, c.value);
      const FamilyMassRatios m = f_family_mass_ratios(in, ff);
      if (m.degenerate) ++broken;
      sparse_max = std::max(sparse_max, m.sparse);
      geometric_max = std::max(geometric_max, m.geometric);
    }
  }
  const bool pass = broken == 0 && g_max <= 2.0 * (1 + kExactTol) && sparse_max <= 0.5 * (1 + kExactTol) &&
                    geometric_max <= 2.0 * (1 + kExactTol);
  return {pass, "600 instances, G Carleson max " + fmt(g_max) + ", sparse max " + fmt(sparse_max) +
                    ", geometric max " + fmt(geometric_max) + ", " + std::to_string(broken) + " structural failures"};
}

Outcome lifted_embedding() {
  bool pass = true;
  std::string detail;
  double nu_max = 0.0;
  double alpha_max = 0.0;
  for (const double p : {2.0, 3.0, 4.0}) {
    std::map<int, double> per_depth;
    for (int depth = 1; depth <= 5; ++depth) {
      for (std::uint64_t i = 0; i < 200; ++i) {
        const Instance in = random_instance(instance_seed(7, static_cast<std::size_t>(p), depth, static_cast<int>(i)), 1,
                                            depth, p, 0.05);
        Rng rng(i);
        const ScaleFunction f = (i % 4 == 0) ? deep_chain_f(in.sys, rng) : random_scale_function(in.sys, rng);
        const Proposition2Report r = proposition2_report(in, f, build_F_family(in, in.sys.root(), f));
        pass &= std::isfinite(r.ratio) && !r.nu_degenerate;
        per_depth[depth] = std::max(per_depth[depth], r.ratio);
        nu_max = std::max(nu_max, r.nu_carleson);
        alpha_max = std::max(alpha_max, r.alpha_error);
      }
    }
    pass &= spread(per_depth) < kStability;
    detail += "p" + fmt(p) + "[" + table(per_depth) + "] ";
  }
  pass &= nu_max <= 4.0 * (1 + kExactTol) && alpha_max <= kExactTol;
  return {pass, detail + "nu-Carleson max " + fmt(nu_max) + ", reconstruction err " + fmt(alpha_max)};
}

// Shared sweep for the theorem and embedding criteria.
const std::vector<ReportRow>& sweep() {
  static const std::vector<ReportRow> rows = [] {
    SweepOptions opt;
    opt.seed = 1;
    opt.instances = 200;
    opt.ps = {2.0, 3.0, 4.0};
    opt.depths = {1, 2, 3, 4, 5};
    opt.restarts = 8;
    return run_sweep(opt);
  }();
  return rows;
}

Outcome theorem_exact() {
  std::size_t bad = 0;
  std::size_t degenerate = 0;
  double lowest = INFINITY;
  for (const ReportRow& r : sweep()) {
    if (std::max(r.T, r.Tstar) > r.lambda_norm_lb + kTheoremTol) ++bad;
    if (r.T + r.Tstar == 0.0) {
      ++degenerate;
      continue;
    }
    lowest = std::min(lowest, r.ratio_upper);
    if (r.ratio_upper < 0.5 - kTheoremTol) ++bad;
  }
  const Instance w1 = worked_w1();
  const TestingReport t = testing_report(w1);
  const NormEstimate e = estimate_norm(w1, t, NormOptions{.restarts = 8});
  const double s = 2.0 * std::sqrt(2.0);
  const double ratio = theorem_ratio(w1, t.T, t.Tstar, e.value).upper;
  const bool worked = rel(t.T, s) <= kTheoremTol && rel(t.Tstar, s) <= kTheoremTol && rel(e.value, s) <= kTheoremTol &&
                      std::abs(ratio - 0.5) <= kTheoremTol;
  return {bad == 0 && worked, std::to_string(sweep().size()) + " instances, " + std::to_string(bad) +
                                  " violations, min ratio_upper " + fmt(lowest) + " (" + std::to_string(degenerate) +
                                  " with T + Tstar = 0), W1 norm " + fmt(e.value) + " ratio " + fmt(ratio)};
}

Outcome theorem_empirical() {
  bool pass = true;
  std::string detail;
  for (const double p : {2.0, 3.0, 4.0}) {
    std::map<int, double> per_depth;
    for (const ReportRow& r : sweep())
      if (r.p == p && r.depth <= 4) {
        pass &= std::isfinite(r.ratio_upper);
        per_depth[r.depth] = std::max(per_depth[r.depth], r.ratio_upper);
      }
    pass &= per_depth.size() == 4 && spread(per_depth) < kStability;
    detail += "p" + fmt(p) + "[" + table(per_depth) + "] ";
  }
  return {pass, "max ratio_upper " + detail};
}

Outcome oracle_agreement() {
  double spectral_worst = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Instance in = random_instance(9000 + i, 1, static_cast<int>(i % 4), 2.0, 0.1);
    const NormEstimate e = estimate_norm(in, NormOptions{.restarts = 8, .seed = i});
    spectral_worst = std::max(spectral_worst, rel(e.value, spectral_oracle_p2(in)));
  }
  double grid_worst = 0.0;
  std::size_t grid_cases = 0;
  for (const double p : {2.0, 3.0, 4.0}) {
    for (std::uint64_t i = 0; grid_cases < 40 * static_cast<std::size_t>(p - 1.0) && i < 2000; ++i) {
      const Instance in = random_instance(12000 + i * 5 + static_cast<std::uint64_t>(p), 1, static_cast<int>(i % 2), p, 0.3);
      if (grid_dof(in) > 6) continue;
      const double grid = grid_oracle(in, 12);
      const double est = estimate_norm(in, NormOptions{.restarts = 8, .seed = i}).value;
      if (grid == 0.0 && est == 0.0) continue;
      grid_worst = std::max(grid_worst, rel(est, grid));
      ++grid_cases;
    }
  }
  return {spectral_worst <= kSpectralTol && grid_worst <= kGridTol && grid_cases >= 100,
          "spectral max rel err " + fmt(spectral_worst) + " on 100, grid max rel err " + fmt(grid_worst) + " on " +
              std::to_string(grid_cases)};
}

Outcome carleson_embedding() {
  bool pass = true;
  std::size_t below = 0;
  std::string detail;
  for (const double p : {2.0, 3.0, 4.0}) {
    std::map<int, double> per_depth;
    for (int depth = 1; depth <= 5; ++depth) {
      for (std::uint64_t i = 0; i < 60; ++i) {
        Rng rng(instance_seed(11, static_cast<std::size_t>(p), depth, static_cast<int>(i)));
        const DyadicSystem sys(1, depth);
        const CarlesonData data = random_carleson_data(sys, rng, 0.1);
        const CarlesonConstant c = carleson_Cprime(data, sys);
        if (c.infinite || c.value == 0.0) continue;
        const double ratio = carleson_ratio_search(data, sys, p, 2, i).C_emp / c.value;
        below += ratio < 1.0 - kExactTol;
        per_depth[depth] = std::max(per_depth[depth], ratio);
      }
    }
    for (const ReportRow& r : sweep())
      if (r.p == p && r.carleson_Cemp_over_Cprime > 0.0) {
        below += r.carleson_Cemp_over_Cprime < 1.0 - kExactTol;
        per_depth[r.depth] = std::max(per_depth[r.depth], r.carleson_Cemp_over_Cprime);
      }
    pass &= spread(per_depth) < kStability;
    detail += "p" + fmt(p) + "[" + table(per_depth) + "] ";
  }
  return {pass && below == 0, std::to_string(below) + " cases with C_emp < C'; max C_emp/C' " + detail};
}

Outcome decomposition() {
  double worst = 0.0;
  std::size_t f_ids = 0;
  std::size_t g_ids = 0;
  bool dichotomy = true;
  bool nontrivial = true;
  for (const double p : {2.0, 3.0, 4.0}) {
    for (const auto& [n, depth] : std::vector<std::pair<int, int>>{{1, 3}, {1, 4}, {1, 5}, {1, 6}, {2, 3}}) {
      AdversarialParams params;
      params.seed = static_cast<std::uint64_t>(n * 100 + depth * 10) + static_cast<std::uint64_t>(p);
      params.dimension = n;
      params.depth = depth;
      params.p = p;
      params.count = 10;
      for (const Instance& in : adversarial_family("deep-chain", params)) {
        Rng rng(params.seed);
        const ScaleFunction f = deep_chain_f(in.sys, rng);
        const AtomFunction g = deep_chain_g(in.sys, rng);
        const StoppingFamily gf = build_G_family(in, in.sys.root(), g);
        const StoppingFamily ff = build_F_family(in, in.sys.root(), f);
        nontrivial &= gf.num_generations() >= 2 && ff.num_generations() >= 2;
        const DecompositionCheck d = check_decompositions(in, f, g, gf, ff);
        dichotomy &= d.dichotomy_holds && d.cubes == in.sys.num_cubes();
        worst = std::max({worst, d.max_f_error, d.max_g_error});
        f_ids += d.f_identities;
        g_ids += d.g_identities;
      }
    }
  }
  return {dichotomy && nontrivial && worst <= kExactTol && f_ids > 0 && g_ids > 0,
          std::to_string(f_ids) + " f-identities, " + std::to_string(g_ids) + " g-identities, max rel err " +
              fmt(worst) + (dichotomy ? "" : ", dichotomy broken") + (nontrivial ? "" : ", trivial family")};
}

Outcome determinism() {
  SweepOptions opt;
  opt.seed = 1;
  const std::string a = run_verify(opt).text(opt);
  const std::string b = run_verify(opt).text(opt);
  return {a == b && !a.empty(), std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 phi identity chain", phi_chain},
      {"2 disjointness inequality", disjointness},
      {"3 stopping family structure", stopping_structure},
      {"4 lifted-measure embedding sweep", lifted_embedding},
      {"5 testing constants bound the norm", theorem_exact},
      {"6 norm vs testing constants is stable", theorem_empirical},
      {"7 oracle agreement", oracle_agreement},
      {"8 Carleson embedding constants", carleson_embedding},
      {"9 decomposition identities", decomposition},
      {"10 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
