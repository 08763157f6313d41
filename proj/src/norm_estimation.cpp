#include "dyadic/norm_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "dyadic/errors.hpp"
#include "dyadic/rng.hpp"

namespace dyadic {

double form_ratio(const Instance& inst, const ScaleFunction& f, const AtomFunction& g) {
  const double nf = mixed_norm(f, inst.sigma, inst.p.p());
  const double ng = lp_norm(g, inst.omega, inst.p.conjugate());
  if (!(nf > 0.0) || !(ng > 0.0)) return 0.0;
  return lambda_form(inst, f, g) / (nf * ng);
}

FHalfStep best_f_given_g(const Instance& inst, const AtomFunction& g) {
  FHalfStep out;
  out.degenerate = !norming_scale_function(apply_Tomega(inst, g), inst.sigma, inst.p, out.f);
  return out;
}

GHalfStep best_g_given_f(const Instance& inst, const ScaleFunction& f) {
  GHalfStep out;
  out.degenerate = !norming_atom_function(apply_Tsigma(inst, f), inst.omega, inst.p, out.g);
  return out;
}

std::vector<SeedPair> default_seeds(const Instance& inst, const TestingReport& testing) {
  const auto& sys = inst.sys;
  std::vector<SeedPair> seeds;
  seeds.emplace_back(test_function(inst, testing.argmax_T), testing.witness_g);
  seeds.emplace_back(testing.witness_f, indicator(sys, testing.argmax_Tstar));
  seeds.emplace_back(ScaleFunction::constant(sys, 1.0), AtomFunction(sys.num_atoms(), 1.0));
  return seeds;
}

namespace {

struct Best {
  double value = -1.0;
  ScaleFunction f;
  AtomFunction g;

  void offer(double r, const ScaleFunction& f_new, const AtomFunction& g_new) {
    if (r > value) {
      value = r;
      f = f_new;
      g = g_new;
    }
  }
};

// Allowed drop of the ratio across one exact half-step (rounding only).
constexpr double kMonotoneSlack = 1e-12;

}  // namespace

NormEstimate alternating_maximization(const Instance& inst, const std::vector<SeedPair>& seeds,
                                      const NormOptions& options) {
  if (options.restarts < 0 || !(options.tol > 0.0) || options.max_iter < 1) {
    throw PreconditionError("invalid alternating maximisation options");
  }
  const auto& sys = inst.sys;
  std::vector<SeedPair> starts = seeds;
  const Rng root(options.seed);
  for (int r = 0; r < options.restarts; ++r) {
    Rng rng = root.substream(static_cast<std::uint64_t>(r));
    ScaleFunction f(sys.num_atoms(), sys.num_levels());
    for (double& v : f.values()) v = rng.log_uniform(1e-3, 1.0);
    AtomFunction g(sys.num_atoms());
    for (double& v : g.values()) v = rng.log_uniform(1e-3, 1.0);
    starts.emplace_back(std::move(f), std::move(g));
  }

  NormEstimate est;
  Best best;
  best.f = ScaleFunction::zeros(sys);
  best.g = AtomFunction(sys.num_atoms());
  for (const auto& [f0, g0] : starts) {
    ++est.restarts;
    ScaleFunction f = f0;
    AtomFunction g = g0;
    double r = form_ratio(inst, f, g);
    best.offer(r, f, g);

    // A seed whose g is annihilated by T^omega may still have a useful f.
    bool f_first = !best_f_given_g(inst, g).degenerate;
    bool done = false;
    for (int it = 0; it < options.max_iter; ++it) {
      const double before = r;
      for (int half = 0; half < 2; ++half) {
        const bool update_f = (half == 0) == f_first;
        if (update_f) {
          auto step = best_f_given_g(inst, g);
          if (step.degenerate) { done = true; break; }
          f = std::move(step.f);
        } else {
          auto step = best_g_given_f(inst, f);
          if (step.degenerate) { done = true; break; }
          g = std::move(step.g);
        }
        const double next = form_ratio(inst, f, g);
        if (next < r * (1.0 - kMonotoneSlack)) est.monotone = false;
        r = next;
        best.offer(r, f, g);
      }
      f_first = true;
      ++est.iterations;
      if (done || r - before <= options.tol * r) {
        done = true;
        break;
      }
    }
    if (!done) est.converged = false;
  }

  est.witness_f = std::move(best.f);
  est.witness_g = std::move(best.g);
  est.value = form_ratio(inst, est.witness_f, est.witness_g);
  est.degenerate = !(est.value > 0.0);
  return est;
}

NormEstimate estimate_norm(const Instance& inst, const TestingReport& testing, const NormOptions& options) {
  return alternating_maximization(inst, default_seeds(inst, testing), options);
}

NormEstimate estimate_norm(const Instance& inst, const NormOptions& options) {
  return estimate_norm(inst, testing_report(inst), options);
}

double spectral_oracle_p2(const Instance& inst) {
  if (!inst.p.is_two()) throw DomainError("the spectral oracle needs p = 2");
  const auto& sys = inst.sys;
  // M x = sqrt(sigma) T^omega'(x), M^T y = sqrt(omega) T^sigma'(y), where the
  // primed operators use the square roots of the weights.
  Instance half = inst;
  for (double& v : half.sigma.values()) v = std::sqrt(v);
  for (double& v : half.omega.values()) v = std::sqrt(v);

  auto apply_m = [&](const AtomFunction& x) {
    ScaleFunction y = apply_Tomega(half, x);
    for (int j = 0; j <= sys.depth(); ++j) {
      for (std::size_t a = 0; a < sys.num_atoms(); ++a) y(a, j) *= half.sigma[a];
    }
    return y;
  };
  auto apply_mt = [&](const ScaleFunction& y) {
    AtomFunction z = apply_Tsigma(half, y);
    for (std::size_t b = 0; b < sys.num_atoms(); ++b) z[b] *= half.omega[b];
    return z;
  };
  auto ell2 = [](std::span<const double> v) {
    double s = 0.0;
    for (const double x : v) s += x * x;
    return std::sqrt(s);
  };

  AtomFunction x(sys.num_atoms(), 1.0 / std::sqrt(static_cast<double>(sys.num_atoms())));
  double value = ell2(apply_m(x).values());
  constexpr int kMaxIter = 200000;
  for (int it = 0; it < kMaxIter && value > 0.0; ++it) {
    AtomFunction z = apply_mt(apply_m(x));
    const double nz = ell2(z.values());
    if (!(nz > 0.0)) break;
    for (std::size_t b = 0; b < z.size(); ++b) z[b] /= nz;
    const double next = ell2(apply_m(z).values());
    x = std::move(z);
    if (next - value <= 1e-15 * next) {
      value = std::max(value, next);
      break;
    }
    value = next;
  }
  return value;
}

std::size_t grid_dof(const Instance& inst) { return inst.sys.num_cells() + inst.sys.num_atoms(); }

namespace {

// Every composition of `total` into `parts` nonnegative integers, scaled to
// sum 1.
std::vector<std::vector<double>> simplex_grid(std::size_t parts, int total) {
  std::vector<std::vector<double>> out;
  std::vector<int> c(parts, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == parts) {
      c[i] = left;
      std::vector<double> v(parts);
      for (std::size_t k = 0; k < parts; ++k) v[k] = static_cast<double>(c[k]) / total;
      out.push_back(std::move(v));
      return;
    }
    for (int k = 0; k <= left; ++k) {
      c[i] = k;
      rec(i + 1, left - k);
    }
  };
  rec(0, total);
  return out;
}

}  // namespace

double grid_oracle(const Instance& inst, int resolution) {
  if (grid_dof(inst) > 6) throw SizeLimitError("grid oracle supports at most 6 degrees of freedom");
  if (resolution < 1) throw PreconditionError("grid resolution must be >= 1");
  const auto& sys = inst.sys;
  const std::size_t nc = sys.num_cells();
  const std::size_t na = sys.num_atoms();

  auto evaluate = [&](const std::vector<double>& x) {
    ScaleFunction f(na, sys.num_levels());
    std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(nc), f.values().begin());
    AtomFunction g(na);
    std::copy(x.begin() + static_cast<std::ptrdiff_t>(nc), x.end(), g.values().begin());
    return form_ratio(inst, f, g);
  };

  const auto fs = simplex_grid(nc, resolution);
  const auto gs = simplex_grid(na, resolution);
  std::vector<std::pair<double, std::vector<double>>> top;
  constexpr std::size_t kKeep = 3;
  for (const auto& fv : fs) {
    for (const auto& gv : gs) {
      std::vector<double> x = fv;
      x.insert(x.end(), gv.begin(), gv.end());
      const double r = evaluate(x);
      if (top.size() < kKeep || r > top.back().first) {
        top.emplace_back(r, std::move(x));
        std::stable_sort(top.begin(), top.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        if (top.size() > kKeep) top.pop_back();
      }
    }
  }

  double best = 0.0;
  for (auto& [r, x] : top) {
    double h = 1.0 / resolution;
    while (h > 1e-10) {
      bool improved = false;
      for (std::size_t i = 0; i < x.size(); ++i) {
        for (const double s : {h, -h}) {
          const double old = x[i];
          x[i] = std::max(0.0, old + s);
          const double next = evaluate(x);
          if (next > r) {
            r = next;
            improved = true;
          } else {
            x[i] = old;
          }
        }
      }
      if (!improved) h *= 0.5;
    }
    best = std::max(best, r);
  }
  return best;
}

TheoremRatio theorem_ratio(const Instance& inst, double T, double Tstar, double norm_estimate) {
  if (inst.p.p() < 2.0) throw DomainError("the testing characterisation needs p >= 2");
  TheoremRatio out;
  if (!(T + Tstar > 0.0) || !(norm_estimate > 0.0)) {
    out.degenerate = true;
    return out;
  }
  out.lower = std::max(T, Tstar) / norm_estimate;
  out.upper = norm_estimate / (T + Tstar);
  return out;
}

}  // namespace dyadic
