#include "dyadic/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "dyadic/errors.hpp"
#include "dyadic/numeric.hpp"
#include "dyadic/rng.hpp"

namespace dyadic {

namespace {

// Sum of a over the subcubes of every cube, by ordinal.
std::vector<double> subtree_sums(const DyadicSystem& sys, const std::vector<double>& a) {
  std::vector<double> out = a;
  const auto& cubes = sys.cubes();
  for (std::size_t o = cubes.size(); o-- > 0;) {
    if (const auto parent = sys.parent(cubes[o])) out[sys.ordinal_unchecked(*parent)] += out[o];
  }
  return out;
}

void check_data(const CarlesonData& data, const DyadicSystem& sys) {
  if (data.a.size() != sys.num_cubes() || data.nu.size() != sys.num_atoms()) {
    throw PreconditionError("Carleson data does not match the system");
  }
  require_nonnegative_finite(data.a, "a");
  require_nonnegative_finite(data.nu.values(), "nu");
}

class EmbeddingRatio {
 public:
  EmbeddingRatio(const CarlesonData& data, const DyadicSystem& sys, double p)
      : data_(data), sys_(sys), p_(p), nu_mass_(masses(sys, data.nu)) {}

  double ratio(const AtomFunction& h) const {
    const double den = lp_norm_pow(h, data_.nu, p_);
    return den > 0.0 ? carleson_lhs(data_, sys_, h, p_) / den : 0.0;
  }

  // One multiplicative update; returns false when the update vanishes.
  bool step(AtomFunction& h) const {
    const auto ints = cube_integrals(sys_, h, data_.nu);
    std::vector<double> coeff(ints.size(), 0.0);
    for (std::size_t o = 0; o < ints.size(); ++o) {
      if (nu_mass_[o] > 0.0) coeff[o] = data_.a[o] * std::pow(ints[o] / nu_mass_[o], p_ - 1.0) / nu_mass_[o];
    }
    AtomFunction next(sys_.num_atoms());
    double top = 0.0;
    for (std::size_t b = 0; b < sys_.num_atoms(); ++b) {
      if (!(data_.nu[b] > 0.0)) continue;
      double s = 0.0;
      for (int j = 0; j <= sys_.depth(); ++j) s += coeff[sys_.ordinal_unchecked(sys_.ancestor(b, j))];
      next[b] = std::pow(s, 1.0 / (p_ - 1.0));
      top = std::max(top, next[b]);
    }
    if (!(top > 0.0) || !std::isfinite(top)) return false;
    for (std::size_t b = 0; b < sys_.num_atoms(); ++b) next[b] /= top;
    h = std::move(next);
    return true;
  }

 private:
  const CarlesonData& data_;
  const DyadicSystem& sys_;
  double p_;
  std::vector<double> nu_mass_;
};

}  // namespace

CarlesonConstant carleson_Cprime(const CarlesonData& data, const DyadicSystem& sys) {
  check_data(data, sys);
  const auto below = subtree_sums(sys, data.a);
  const auto nu = masses(sys, data.nu);
  CarlesonConstant out;
  for (std::size_t o = 0; o < below.size(); ++o) {
    if (nu[o] > 0.0) {
      out.value = std::max(out.value, below[o] / nu[o]);
    } else if (below[o] > 0.0) {
      out.infinite = true;
    }
  }
  return out;
}

double carleson_lhs(const CarlesonData& data, const DyadicSystem& sys, const AtomFunction& h, double p) {
  const auto ints = cube_integrals(sys, h, data.nu);
  const auto nu = masses(sys, data.nu);
  double sum = 0.0;
  for (std::size_t o = 0; o < ints.size(); ++o) {
    if (nu[o] > 0.0 && data.a[o] > 0.0) sum += data.a[o] * std::pow(ints[o] / nu[o], p);
  }
  return sum;
}

CarlesonSearch carleson_ratio_search(const CarlesonData& data, const DyadicSystem& sys, double p,
                                     int restarts, std::uint64_t seed) {
  check_data(data, sys);
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("exponent must be > 1");
  const EmbeddingRatio objective(data, sys, p);

  // Indicator starts, ranked by their own ratio.
  std::vector<std::pair<double, std::size_t>> ranked;
  CarlesonSearch best;
  best.witness = AtomFunction(sys.num_atoms());
  for (std::size_t o = 0; o < sys.num_cubes(); ++o) {
    const AtomFunction h = indicator(sys, sys.cube(o));
    const double r = objective.ratio(h);
    ranked.emplace_back(r, o);
    if (r > best.C_emp) {
      best.C_emp = r;
      best.witness = h;
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.first > y.first; });

  std::vector<AtomFunction> starts;
  const std::size_t kIndicatorAscents = 4;
  for (std::size_t i = 0; i < std::min(kIndicatorAscents, ranked.size()); ++i) {
    starts.push_back(indicator(sys, sys.cube(ranked[i].second)));
  }
  starts.emplace_back(sys.num_atoms(), 1.0);
  const Rng root(seed);
  for (int r = 0; r < restarts; ++r) {
    Rng rng = root.substream(static_cast<std::uint64_t>(r));
    AtomFunction h(sys.num_atoms());
    for (std::size_t b = 0; b < sys.num_atoms(); ++b) h[b] = rng.log_uniform(1e-3, 1.0);
    starts.push_back(std::move(h));
  }

  constexpr int kMaxIter = 500;
  for (AtomFunction h : starts) {
    double prev = objective.ratio(h);
    for (int it = 0; it < kMaxIter; ++it) {
      if (prev > best.C_emp) {
        best.C_emp = prev;
        best.witness = h;
      }
      if (!objective.step(h)) break;
      const double r = objective.ratio(h);
      if (r > best.C_emp) {
        best.C_emp = r;
        best.witness = h;
      }
      if (std::fabs(r - prev) <= 1e-13 * std::max(r, prev)) break;
      prev = r;
    }
  }
  return best;
}

DisjointCheck lemma_disjoint_check(const ScaleFunction& f, const Weights& sigma, double p,
                                   const std::vector<std::vector<Cell>>& partition) {
  std::vector<char> used(f.size(), 0);
  for (const auto& set : partition) {
    for (const Cell c : set) {
      if (c.atom >= f.num_atoms() || c.level < 0 || c.level >= f.num_levels()) {
        throw PreconditionError("partition cell outside the lattice");
      }
      char& u = used[static_cast<std::size_t>(c.level) * f.num_atoms() + c.atom];
      if (u) throw PreconditionError("partition sets overlap");
      u = 1;
    }
  }
  DisjointCheck out;
  for (const auto& set : partition) out.lhs += mixed_norm_pow(restrict_to_cells(f, set), sigma, p);
  out.rhs = mixed_norm_pow(f, sigma, p);
  out.holds = out.lhs <= out.rhs + 1e-12 * out.rhs;
  return out;
}

Proposition2Report proposition2_report(const Instance& inst, const ScaleFunction& f, const StoppingFamily& family) {
  if (inst.p.p() < 2.0) throw DomainError("the embedding for the F-type family needs p >= 2");
  const auto& sys = inst.sys;
  const double p = inst.p.p();
  Proposition2Report out;

  std::map<CubeId, double> phi_mass;
  for (const CubeId m : family.members()) phi_mass.emplace(m, phi_norm_pow(inst, m));

  for (const CubeId m : family.members()) {
    const double bracket_value = bracket(inst, f, m);
    out.lhs += std::pow(bracket_value, p) * phi_mass.at(m);
    out.lifted_mass += phi_mass.at(m);
  }
  out.rhs = mixed_norm_pow(f, inst.sigma, p);
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;

  // Lifted measure of each member box, and the integral of f mu over the
  // part of each box not covered by stopping children.
  std::map<CubeId, double> nu_box;
  std::map<CubeId, double> e_integral;
  for (const CubeId m : family.members()) {
    double s = 0.0;
    for (const CubeId c : family.members()) {
      if (sys.contains(m, c)) s += phi_mass.at(c);
    }
    nu_box.emplace(m, s);
    double e = 0.0;
    for (const Cell c : E_hat(sys, family, m)) e += inst.sigma[c.atom] * f[c] * inst.mu[c];
    e_integral.emplace(m, e);
  }
  for (const CubeId m : family.members()) {
    double carleson = 0.0;
    double alpha = 0.0;
    for (const CubeId c : family.members()) {
      if (!sys.contains(m, c)) continue;
      carleson += nu_box.at(c);
      alpha += e_integral.at(c);
    }
    if (nu_box.at(m) > 0.0) {
      out.nu_carleson = std::max(out.nu_carleson, carleson / nu_box.at(m));
    } else if (carleson > 0.0) {
      out.nu_degenerate = true;
    }
    const double direct = box_integral(sys, f, inst.mu, inst.sigma, m);
    out.alpha_error = std::max(out.alpha_error, relative_difference(direct, alpha));
  }
  return out;
}

}  // namespace dyadic
