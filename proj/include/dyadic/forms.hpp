#pragma once
// The positive dyadic form
//
//   Lambda(f, g) = sum_Q lambda_Q (box integral of f mu over Q) (integral of g over Q, w.r.t. omega),
//
// its localisations, the operator T^sigma : L^p(sigma; l^2) -> L^p(omega),
// its formal adjoint T^omega, and the test functions phi_Q.

#include <vector>

#include "dyadic/dyadic_system.hpp"
#include "dyadic/measure.hpp"

namespace dyadic {

struct Instance {
  DyadicSystem sys{1, 0};
  Exponent p;
  Weights sigma;
  Weights omega;
  ScaleFunction mu;
  std::vector<double> lambda;  // indexed by cube ordinal

  double lambda_at(CubeId q) const { return lambda[sys.ordinal(q)]; }
};

// Checks array sizes and that every value is finite and nonnegative.
// Throws PreconditionError on size mismatch, DomainError on bad values.
void validate(const Instance& inst);

Instance make_instance(DyadicSystem sys, double p, Weights sigma, Weights omega, ScaleFunction mu,
                       std::vector<double> lambda);

double lambda_form(const Instance& inst, const ScaleFunction& f, const AtomFunction& g);
// Sum restricted to cubes Q contained in `top`.
double lambda_form_local(const Instance& inst, CubeId top, const ScaleFunction& f, const AtomFunction& g);

// (T^sigma f)(a) = sum_{Q containing a} lambda_Q * box_integral(f, Q).
AtomFunction apply_Tsigma(const Instance& inst, const ScaleFunction& f);
AtomFunction apply_Tsigma_local(const Instance& inst, const ScaleFunction& f, CubeId top);

// (T^omega g)(a, j) = mu(a, j) * sum_{Q : (a, j) in box(Q)} lambda_Q * integral_Q g d omega.
ScaleFunction apply_Tomega(const Instance& inst, const AtomFunction& g);
ScaleFunction apply_Tomega_local(const Instance& inst, const AtomFunction& g, CubeId top);

// phi_Q = |1_{box Q} mu|_{l^2}^{p'-2} 1_{box Q} mu, zero where the slice vanishes.
ScaleFunction test_function(const Instance& inst, CubeId q);
// ||phi_Q||^p_{L^p(sigma; l^2)}, evaluated as sum_{a in Q} sigma(a) |1_{box Q} mu|_{l^2}(a)^{p'}.
double phi_norm_pow(const Instance& inst, CubeId q);

// The four members of the phi_Q identity chain, each computed independently:
//   pairing      = box integral of phi_Q mu over Q
//   slice        = integral over Q of |1_{box Q} mu|^{p'} d sigma
//   dual_norm    = ||1_{box Q} mu||^{p'}_{L^{p'}(sigma; l^2)}
//   phi_norm     = ||phi_Q||^p_{L^p(sigma; l^2)}
struct PhiIdentity {
  double pairing = 0.0;
  double slice = 0.0;
  double dual_norm = 0.0;
  double phi_norm = 0.0;

  // Largest pairwise relative difference (0 when all four are 0).
  double max_relative_spread() const;
};

PhiIdentity phi_identity_check(const Instance& inst, CubeId q);

// Unit-norm maximisers of the dual pairings. Both return false (and leave
// `out` zero) when the input vanishes.
//
// Given h >= 0, g = h^{p-1} / ||h||_{L^p(w)}^{p-1} has ||g||_{L^{p'}(w)} = 1
// and integral g h dw = ||h||_{L^p(w)}.
bool norming_atom_function(const AtomFunction& h, const Weights& w, const Exponent& p, AtomFunction& out);
// Given K >= 0, f = s^{p'-2} K / ||K||^{p'-1} with s = |K|_{l^2} has unit
// L^p(sigma; l^2) norm and pairs with K to ||K||_{L^{p'}(sigma; l^2)}.
bool norming_scale_function(const ScaleFunction& k, const Weights& sigma, const Exponent& p, ScaleFunction& out);

// sum_{a, j} sigma(a) f(a, j) k(a, j).
double scale_pairing(const ScaleFunction& f, const ScaleFunction& k, const Weights& sigma);
// sum_a w(a) g(a) h(a).
double atom_pairing(const AtomFunction& g, const AtomFunction& h, const Weights& w);

}  // namespace dyadic
