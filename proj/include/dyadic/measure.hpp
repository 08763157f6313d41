#pragma once
// Discrete weights and functions on the truncated lattice, and the norms of
// L^p(w) and the mixed space L^p(sigma; l^2).

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "dyadic/dyadic_system.hpp"

namespace dyadic {

// Exponent p in (1, inf) together with its Hoelder conjugate.
class Exponent {
 public:
  Exponent() : Exponent(2.0) {}
  // Throws DomainError unless p is finite and > 1.
  explicit Exponent(double p);

  double p() const noexcept { return p_; }
  double conjugate() const noexcept { return conj_; }
  bool is_two() const noexcept { return p_ == 2.0; }

 private:
  double p_;
  double conj_;
};

// A nonnegative value per atom. The tag keeps measures (sigma, omega, nu)
// and functions (g, T f, ...) apart at the type level.
template <class Tag>
class AtomArray {
 public:
  AtomArray() = default;
  explicit AtomArray(std::size_t size, double fill = 0.0) : values_(size, fill) {}
  explicit AtomArray(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t atom) const { return values_[atom]; }
  double& operator[](std::size_t atom) { return values_[atom]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> range(std::size_t begin, std::size_t end) const {
    return std::span<const double>(values_).subspan(begin, end - begin);
  }

  friend bool operator==(const AtomArray&, const AtomArray&) = default;

 private:
  std::vector<double> values_;
};

using Weights = AtomArray<struct WeightsTag>;
using AtomFunction = AtomArray<struct AtomFunctionTag>;

// A value per cell (atom, level), stored level-major.
class ScaleFunction {
 public:
  ScaleFunction() = default;
  ScaleFunction(std::size_t num_atoms, int num_levels, double fill = 0.0)
      : num_atoms_(num_atoms), num_levels_(num_levels),
        values_(num_atoms * static_cast<std::size_t>(num_levels), fill) {}

  static ScaleFunction zeros(const DyadicSystem& sys) { return constant(sys, 0.0); }
  static ScaleFunction constant(const DyadicSystem& sys, double v) {
    return ScaleFunction(sys.num_atoms(), sys.num_levels(), v);
  }

  std::size_t num_atoms() const noexcept { return num_atoms_; }
  int num_levels() const noexcept { return num_levels_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator()(std::size_t atom, int level) const {
    return values_[static_cast<std::size_t>(level) * num_atoms_ + atom];
  }
  double& operator()(std::size_t atom, int level) {
    return values_[static_cast<std::size_t>(level) * num_atoms_ + atom];
  }
  double operator[](Cell c) const { return (*this)(c.atom, c.level); }
  double& operator[](Cell c) { return (*this)(c.atom, c.level); }

  std::span<const double> level(int j) const {
    return std::span<const double>(values_).subspan(static_cast<std::size_t>(j) * num_atoms_, num_atoms_);
  }
  std::span<double> level(int j) {
    return std::span<double>(values_).subspan(static_cast<std::size_t>(j) * num_atoms_, num_atoms_);
  }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  friend bool operator==(const ScaleFunction&, const ScaleFunction&) = default;

 private:
  std::size_t num_atoms_ = 0;
  int num_levels_ = 0;
  std::vector<double> values_;
};

// Throws DomainError if any entry is negative, NaN or infinite.
void require_nonnegative_finite(std::span<const double> values, std::string_view what);

// Per-atom sum over levels of f(a, j)^2.
std::vector<double> slice_squares(const ScaleFunction& f);
// |f|_{l^2}(a) = sqrt(sum_j f(a, j)^2).
AtomFunction ell2_slice(const ScaleFunction& f);

// ||f||^p_{L^p(sigma; l^2)} and its p-th root.
double mixed_norm_pow(const ScaleFunction& f, const Weights& sigma, double p);
double mixed_norm(const ScaleFunction& f, const Weights& sigma, double p);

// ||g||^p_{L^p(w)} and its p-th root.
double lp_norm_pow(const AtomFunction& g, const Weights& w, double p);
double lp_norm(const AtomFunction& g, const Weights& w, double p);

// Sum over the Carleson box of q of sigma(a) f(a, j) mu(a, j).
double box_integral(const DyadicSystem& sys, const ScaleFunction& f, const ScaleFunction& mu,
                    const Weights& sigma, CubeId q);
// box_integral for every cube contained in `top`, indexed by ordinal; zero
// for cubes outside `top`.
std::vector<double> box_integrals(const DyadicSystem& sys, const ScaleFunction& f,
                                  const ScaleFunction& mu, const Weights& sigma, CubeId top);

// Sum over atoms of q of w(a) g(a).
double cube_integral(const DyadicSystem& sys, const AtomFunction& g, const Weights& w, CubeId q);
// cube_integral for every cube, indexed by ordinal.
std::vector<double> cube_integrals(const DyadicSystem& sys, const AtomFunction& g, const Weights& w);
// w(q).
double mass(const DyadicSystem& sys, const Weights& w, CubeId q);
// w(q) for every cube, indexed by ordinal.
std::vector<double> masses(const DyadicSystem& sys, const Weights& w);
// <g>^w_q, zero when w(q) = 0.
double average(const DyadicSystem& sys, const AtomFunction& g, const Weights& w, CubeId q);

// 1_{box(q)} f.
ScaleFunction restrict_to_box(const DyadicSystem& sys, const ScaleFunction& f, CubeId q);
// 1_E f for a set of cells E.
ScaleFunction restrict_to_cells(const ScaleFunction& f, std::span<const Cell> cells);
// 1_q g.
AtomFunction restrict_to_cube(const DyadicSystem& sys, const AtomFunction& g, CubeId q);
AtomFunction indicator(const DyadicSystem& sys, CubeId q);

}  // namespace dyadic
