#include "dyadic/measure.hpp"

#include <cmath>
#include <string>

#include "dyadic/errors.hpp"
#include "dyadic/simd/kernels.hpp"

namespace dyadic {

Exponent::Exponent(double p) : p_(p), conj_(0.0) {
  if (!std::isfinite(p) || !(p > 1.0)) {
    throw DomainError("exponent must be a finite real > 1 (got " + std::to_string(p) + ")");
  }
  conj_ = p / (p - 1.0);
}

void require_nonnegative_finite(std::span<const double> values, std::string_view what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v) || v < 0.0) {
      throw DomainError(std::string(what) + "[" + std::to_string(i) + "] = " + std::to_string(v) +
                        " is not a finite nonnegative number");
    }
  }
}

std::vector<double> slice_squares(const ScaleFunction& f) {
  std::vector<double> acc(f.num_atoms(), 0.0);
  for (int j = 0; j < f.num_levels(); ++j) simd::add_squares(acc, f.level(j));
  return acc;
}

AtomFunction ell2_slice(const ScaleFunction& f) {
  std::vector<double> acc = slice_squares(f);
  for (double& v : acc) v = std::sqrt(v);
  return AtomFunction(std::move(acc));
}

double mixed_norm_pow(const ScaleFunction& f, const Weights& sigma, double p) {
  std::vector<double> s2 = slice_squares(f);
  if (p != 2.0) {
    const double half = 0.5 * p;
    for (double& v : s2) v = std::pow(v, half);
  }
  return simd::dot(sigma.values(), s2);
}

double mixed_norm(const ScaleFunction& f, const Weights& sigma, double p) {
  return std::pow(mixed_norm_pow(f, sigma, p), 1.0 / p);
}

double lp_norm_pow(const AtomFunction& g, const Weights& w, double p) {
  std::vector<double> gp(g.values().begin(), g.values().end());
  for (double& v : gp) v = (p == 2.0) ? v * v : std::pow(v, p);
  return simd::dot(w.values(), gp);
}

double lp_norm(const AtomFunction& g, const Weights& w, double p) {
  return std::pow(lp_norm_pow(g, w, p), 1.0 / p);
}

double box_integral(const DyadicSystem& sys, const ScaleFunction& f, const ScaleFunction& mu,
                    const Weights& sigma, CubeId q) {
  sys.ordinal(q);
  const std::size_t b = sys.atom_begin(q);
  const std::size_t n = sys.atom_count(q);
  std::vector<double> rows;
  rows.reserve(static_cast<std::size_t>(sys.depth() - q.level + 1));
  for (int j = q.level; j <= sys.depth(); ++j) {
    rows.push_back(simd::dot(sigma.values().subspan(b, n), f.level(j).subspan(b, n), mu.level(j).subspan(b, n)));
  }
  return simd::sum(rows);
}

std::vector<double> box_integrals(const DyadicSystem& sys, const ScaleFunction& f,
                                  const ScaleFunction& mu, const Weights& sigma, CubeId top) {
  sys.ordinal(top);
  std::vector<double> out(sys.num_cubes(), 0.0);
  const int n = sys.dimension();
  // box(Q) = (Q x {level(Q)}) + union of the children's boxes, bottom-up.
  for (int k = sys.depth(); k >= top.level; --k) {
    const std::uint64_t first = top.code << (n * (k - top.level));
    const std::uint64_t last = (top.code + 1) << (n * (k - top.level));
    for (std::uint64_t c = first; c < last; ++c) {
      const CubeId q{k, c};
      const std::size_t b = sys.atom_begin(q);
      const std::size_t cnt = sys.atom_count(q);
      double v = simd::dot(sigma.values().subspan(b, cnt), f.level(k).subspan(b, cnt), mu.level(k).subspan(b, cnt));
      if (k < sys.depth()) {
        for (std::uint64_t ch = 0; ch < sys.fanout(); ++ch) {
          v += out[sys.ordinal_unchecked(CubeId{k + 1, (c << n) | ch})];
        }
      }
      out[sys.ordinal_unchecked(q)] = v;
    }
  }
  return out;
}

double cube_integral(const DyadicSystem& sys, const AtomFunction& g, const Weights& w, CubeId q) {
  sys.ordinal(q);
  const std::size_t b = sys.atom_begin(q);
  const std::size_t e = sys.atom_end(q);
  return simd::dot(w.range(b, e), g.range(b, e));
}

std::vector<double> cube_integrals(const DyadicSystem& sys, const AtomFunction& g, const Weights& w) {
  std::vector<double> out(sys.num_cubes());
  for (std::size_t i = 0; i < sys.num_cubes(); ++i) {
    const CubeId q = sys.cube(i);
    out[i] = simd::dot(w.range(sys.atom_begin(q), sys.atom_end(q)), g.range(sys.atom_begin(q), sys.atom_end(q)));
  }
  return out;
}

double mass(const DyadicSystem& sys, const Weights& w, CubeId q) {
  sys.ordinal(q);
  return simd::sum(w.range(sys.atom_begin(q), sys.atom_end(q)));
}

std::vector<double> masses(const DyadicSystem& sys, const Weights& w) {
  std::vector<double> out(sys.num_cubes());
  for (std::size_t i = 0; i < sys.num_cubes(); ++i) {
    const CubeId q = sys.cube(i);
    out[i] = simd::sum(w.range(sys.atom_begin(q), sys.atom_end(q)));
  }
  return out;
}

double average(const DyadicSystem& sys, const AtomFunction& g, const Weights& w, CubeId q) {
  const double m = mass(sys, w, q);
  if (m == 0.0) return 0.0;
  return cube_integral(sys, g, w, q) / m;
}

ScaleFunction restrict_to_box(const DyadicSystem& sys, const ScaleFunction& f, CubeId q) {
  sys.ordinal(q);
  ScaleFunction out(f.num_atoms(), f.num_levels());
  for (int j = q.level; j <= sys.depth(); ++j) {
    for (std::size_t a = sys.atom_begin(q); a < sys.atom_end(q); ++a) out(a, j) = f(a, j);
  }
  return out;
}

ScaleFunction restrict_to_cells(const ScaleFunction& f, std::span<const Cell> cells) {
  ScaleFunction out(f.num_atoms(), f.num_levels());
  for (const Cell& c : cells) out[c] = f[c];
  return out;
}

AtomFunction restrict_to_cube(const DyadicSystem& sys, const AtomFunction& g, CubeId q) {
  sys.ordinal(q);
  AtomFunction out(g.size());
  for (std::size_t a = sys.atom_begin(q); a < sys.atom_end(q); ++a) out[a] = g[a];
  return out;
}

AtomFunction indicator(const DyadicSystem& sys, CubeId q) {
  sys.ordinal(q);
  AtomFunction out(sys.num_atoms());
  for (std::size_t a = sys.atom_begin(q); a < sys.atom_end(q); ++a) out[a] = 1.0;
  return out;
}

}  // namespace dyadic
