#pragma once
// The dyadic Carleson embedding
//
//   sum_Q a_Q (<h>^nu_Q)^p <= C ||h||^p_{L^p(nu)}
//
// and its testing condition sum_{Q' in Q} a_Q' <= C' nu(Q); the
// disjointness inequality for the mixed norm; and the embedding of the
// F-type stopping family, where the lifted measure puts mass ||phi_F||^p on
// each member F.

#include <cstdint>
#include <vector>

#include "dyadic/stopping.hpp"

namespace dyadic {

struct CarlesonData {
  std::vector<double> a;  // per cube ordinal
  Weights nu;
};

// Smallest C' over cubes with nu(Q) > 0; `infinite` when a nu-null cube
// carries positive a-mass below it.
CarlesonConstant carleson_Cprime(const CarlesonData& data, const DyadicSystem& sys);

// sum_Q a_Q (<h>^nu_Q)^p.
double carleson_lhs(const CarlesonData& data, const DyadicSystem& sys, const AtomFunction& h, double p);

struct CarlesonSearch {
  double C_emp = 0.0;
  AtomFunction witness;
};

// Maximises carleson_lhs / ||h||^p_{L^p(nu)} by the multiplicative update
//   h(b) <- (sum_{Q containing b} a_Q <h>_Q^{p-1} / nu(Q))^{1/(p-1)},
// started from the indicator of every cube and from `restarts` random
// functions. The indicator starts make C_emp >= C'.
CarlesonSearch carleson_ratio_search(const CarlesonData& data, const DyadicSystem& sys, double p,
                                     int restarts, std::uint64_t seed);

struct DisjointCheck {
  double lhs = 0.0;  // sum_i ||1_{E_i} f||^p
  double rhs = 0.0;  // ||f||^p
  bool holds = true; // lhs <= rhs (1 + 1e-12)
};

// Throws PreconditionError when two sets share a cell.
DisjointCheck lemma_disjoint_check(const ScaleFunction& f, const Weights& sigma, double p,
                                   const std::vector<std::vector<Cell>>& partition);

struct Proposition2Report {
  double lhs = 0.0;    // sum_F [f]_F^p ||phi_F||^p
  double rhs = 0.0;    // ||f||^p
  double ratio = 0.0;  // lhs / rhs, 0/0 -> 0
  // max_F sum_{F' in F} nu(F') / nu(F) for the lifted measure
  // nu(F) = sum_{F' in F} ||phi_F'||^p.
  double nu_carleson = 0.0;
  bool nu_degenerate = false;
  // max_F relative error of box(f mu, F) = sum_{F' in F} integral of f mu over E(F').
  double alpha_error = 0.0;
  double lifted_mass = 0.0;  // total mass of the lifted measure
};

// Throws DomainError for p < 2.
Proposition2Report proposition2_report(const Instance& inst, const ScaleFunction& f, const StoppingFamily& family);

}  // namespace dyadic
