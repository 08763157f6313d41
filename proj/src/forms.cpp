#include "dyadic/forms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dyadic/errors.hpp"
#include "dyadic/simd/kernels.hpp"

namespace dyadic {

void validate(const Instance& inst) {
  const auto& sys = inst.sys;
  if (inst.sigma.size() != sys.num_atoms()) throw PreconditionError("sigma has the wrong number of atoms");
  if (inst.omega.size() != sys.num_atoms()) throw PreconditionError("omega has the wrong number of atoms");
  if (inst.mu.num_atoms() != sys.num_atoms() || inst.mu.num_levels() != sys.num_levels()) {
    throw PreconditionError("mu does not match the system");
  }
  if (inst.lambda.size() != sys.num_cubes()) throw PreconditionError("lambda has the wrong number of cubes");
  require_nonnegative_finite(inst.sigma.values(), "sigma");
  require_nonnegative_finite(inst.omega.values(), "omega");
  require_nonnegative_finite(inst.mu.values(), "mu");
  require_nonnegative_finite(inst.lambda, "lambda");
}

Instance make_instance(DyadicSystem sys, double p, Weights sigma, Weights omega, ScaleFunction mu,
                       std::vector<double> lambda) {
  Instance inst{std::move(sys), Exponent(p), std::move(sigma), std::move(omega), std::move(mu), std::move(lambda)};
  validate(inst);
  return inst;
}

double lambda_form(const Instance& inst, const ScaleFunction& f, const AtomFunction& g) {
  return lambda_form_local(inst, inst.sys.root(), f, g);
}

double lambda_form_local(const Instance& inst, CubeId top, const ScaleFunction& f, const AtomFunction& g) {
  const std::vector<double> boxes = box_integrals(inst.sys, f, inst.mu, inst.sigma, top);
  const std::vector<double> cubes = cube_integrals(inst.sys, g, inst.omega);
  return simd::dot(inst.lambda, boxes, cubes);
}

namespace {

// Walks the cubes of `top` level by level and accumulates, for every cube,
// the sum of weight(Q') over its ancestors Q' inside `top` (itself included).
// Calls visit(level, code, accumulated) for each cube.
template <class Weight, class Visit>
void accumulate_down(const DyadicSystem& sys, CubeId top, Weight&& weight, Visit&& visit) {
  const int n = sys.dimension();
  std::vector<double> prev{weight(top)};
  visit(top.level, top.code, prev[0]);
  for (int k = top.level + 1; k <= sys.depth(); ++k) {
    const std::uint64_t first = top.code << (n * (k - top.level));
    const std::uint64_t last = (top.code + 1) << (n * (k - top.level));
    const std::uint64_t prev_first = first >> n;
    std::vector<double> cur(static_cast<std::size_t>(last - first));
    for (std::uint64_t c = first; c < last; ++c) {
      const double v = prev[static_cast<std::size_t>((c >> n) - prev_first)] + weight(CubeId{k, c});
      cur[static_cast<std::size_t>(c - first)] = v;
      visit(k, c, v);
    }
    prev = std::move(cur);
  }
}

}  // namespace

AtomFunction apply_Tsigma(const Instance& inst, const ScaleFunction& f) {
  return apply_Tsigma_local(inst, f, inst.sys.root());
}

AtomFunction apply_Tsigma_local(const Instance& inst, const ScaleFunction& f, CubeId top) {
  const auto& sys = inst.sys;
  const std::vector<double> boxes = box_integrals(sys, f, inst.mu, inst.sigma, top);
  AtomFunction out(sys.num_atoms());
  accumulate_down(
      sys, top,
      [&](CubeId q) {
        const std::size_t o = sys.ordinal_unchecked(q);
        return inst.lambda[o] * boxes[o];
      },
      [&](int level, std::uint64_t code, double acc) {
        if (level == sys.depth()) out[static_cast<std::size_t>(code)] = acc;
      });
  return out;
}

ScaleFunction apply_Tomega(const Instance& inst, const AtomFunction& g) {
  return apply_Tomega_local(inst, g, inst.sys.root());
}

ScaleFunction apply_Tomega_local(const Instance& inst, const AtomFunction& g, CubeId top) {
  const auto& sys = inst.sys;
  sys.ordinal(top);
  ScaleFunction coeff(sys.num_atoms(), sys.num_levels());
  accumulate_down(
      sys, top,
      [&](CubeId q) {
        const std::size_t o = sys.ordinal_unchecked(q);
        if (inst.lambda[o] == 0.0) return 0.0;
        return inst.lambda[o] * cube_integral(sys, g, inst.omega, q);
      },
      [&](int level, std::uint64_t code, double acc) {
        const CubeId q{level, code};
        auto row = coeff.level(level);
        std::fill(row.begin() + static_cast<std::ptrdiff_t>(sys.atom_begin(q)),
                  row.begin() + static_cast<std::ptrdiff_t>(sys.atom_end(q)), acc);
      });
  ScaleFunction out(sys.num_atoms(), sys.num_levels());
  simd::mul(out.values(), coeff.values(), inst.mu.values());
  return out;
}

namespace {

// Per-atom |1_{box Q} mu|^2 for atoms of q (zero elsewhere).
std::vector<double> box_slice_squares(const Instance& inst, CubeId q) {
  const auto& sys = inst.sys;
  const std::size_t b = sys.atom_begin(q);
  const std::size_t n = sys.atom_count(q);
  std::vector<double> s2(sys.num_atoms(), 0.0);
  for (int j = q.level; j <= sys.depth(); ++j) {
    simd::add_squares(std::span<double>(s2).subspan(b, n), inst.mu.level(j).subspan(b, n));
  }
  return s2;
}

}  // namespace

ScaleFunction test_function(const Instance& inst, CubeId q) {
  const auto& sys = inst.sys;
  sys.ordinal(q);
  ScaleFunction phi(sys.num_atoms(), sys.num_levels());
  const double expo = inst.p.conjugate() - 2.0;
  const std::vector<double> s2 = box_slice_squares(inst, q);
  for (std::size_t a = sys.atom_begin(q); a < sys.atom_end(q); ++a) {
    if (s2[a] == 0.0) continue;
    const double factor = inst.p.is_two() ? 1.0 : std::pow(s2[a], 0.5 * expo);
    for (int j = q.level; j <= sys.depth(); ++j) phi(a, j) = factor * inst.mu(a, j);
  }
  return phi;
}

double phi_norm_pow(const Instance& inst, CubeId q) {
  const auto& sys = inst.sys;
  sys.ordinal(q);
  std::vector<double> s2 = box_slice_squares(inst, q);
  const double half = 0.5 * inst.p.conjugate();
  const std::size_t b = sys.atom_begin(q);
  const std::size_t e = sys.atom_end(q);
  for (std::size_t a = b; a < e; ++a) s2[a] = inst.p.is_two() ? s2[a] : std::pow(s2[a], half);
  return simd::dot(inst.sigma.range(b, e), std::span<const double>(s2).subspan(b, e - b));
}

double PhiIdentity::max_relative_spread() const {
  const double v[4] = {pairing, slice, dual_norm, phi_norm};
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int k = i + 1; k < 4; ++k) {
      const double scale = std::max(std::fabs(v[i]), std::fabs(v[k]));
      if (scale == 0.0) continue;
      worst = std::max(worst, std::fabs(v[i] - v[k]) / scale);
    }
  }
  return worst;
}

PhiIdentity phi_identity_check(const Instance& inst, CubeId q) {
  const ScaleFunction phi = test_function(inst, q);
  const ScaleFunction mu_q = restrict_to_box(inst.sys, inst.mu, q);
  PhiIdentity out;
  out.pairing = box_integral(inst.sys, phi, inst.mu, inst.sigma, q);
  out.slice = phi_norm_pow(inst, q);
  out.dual_norm = std::pow(mixed_norm(mu_q, inst.sigma, inst.p.conjugate()), inst.p.conjugate());
  out.phi_norm = std::pow(mixed_norm(phi, inst.sigma, inst.p.p()), inst.p.p());
  return out;
}

bool norming_atom_function(const AtomFunction& h, const Weights& w, const Exponent& p, AtomFunction& out) {
  out = AtomFunction(h.size());
  const double norm = lp_norm(h, w, p.p());
  if (!(norm > 0.0)) return false;
  const double scale = std::pow(norm, p.p() - 1.0);
  for (std::size_t a = 0; a < h.size(); ++a) {
    out[a] = (p.is_two() ? h[a] : std::pow(h[a], p.p() - 1.0)) / scale;
  }
  return true;
}

bool norming_scale_function(const ScaleFunction& k, const Weights& sigma, const Exponent& p, ScaleFunction& out) {
  out = ScaleFunction(k.num_atoms(), k.num_levels());
  const double q = p.conjugate();
  const double norm = mixed_norm(k, sigma, q);
  if (!(norm > 0.0)) return false;
  const double scale = std::pow(norm, q - 1.0);
  const std::vector<double> s2 = slice_squares(k);
  for (std::size_t a = 0; a < k.num_atoms(); ++a) {
    if (s2[a] == 0.0) continue;
    const double factor = (p.is_two() ? 1.0 : std::pow(s2[a], 0.5 * (q - 2.0))) / scale;
    for (int j = 0; j < k.num_levels(); ++j) out(a, j) = factor * k(a, j);
  }
  return true;
}

double scale_pairing(const ScaleFunction& f, const ScaleFunction& k, const Weights& sigma) {
  std::vector<double> rows;
  rows.reserve(static_cast<std::size_t>(f.num_levels()));
  for (int j = 0; j < f.num_levels(); ++j) rows.push_back(simd::dot(sigma.values(), f.level(j), k.level(j)));
  return simd::sum(rows);
}

double atom_pairing(const AtomFunction& g, const AtomFunction& h, const Weights& w) {
  return simd::dot(w.values(), g.values(), h.values());
}

}  // namespace dyadic
