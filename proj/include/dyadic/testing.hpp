#pragma once
// Testing constants of the form, computed exactly by L^p duality.
//
//   T     = max_Q ||T^sigma_Q phi_Q||_{L^p(omega)} / ||phi_Q||_{L^p(sigma; l^2)}
//   Tstar = max_Q ||K_Q||_{L^{p'}(sigma; l^2)} / omega(Q)^{1/p'}
//
// where T^sigma_Q keeps only the cubes inside Q and K_Q = T^omega_Q 1_Q.
// Cubes with a vanishing denominator contribute 0. Ties in the maximum go to
// the first cube in enumeration order.

#include <vector>

#include "dyadic/forms.hpp"

namespace dyadic {

struct ForwardTesting {
  double value = 0.0;
  CubeId argmax;
  AtomFunction witness_g;         // unit L^{p'}(omega) norming function at argmax
  std::vector<double> per_cube;   // ratio per cube ordinal
};

struct DualTesting {
  double value = 0.0;
  CubeId argmax;
  ScaleFunction witness_f;        // unit L^p(sigma; l^2) norming function at argmax
  std::vector<double> per_cube;
};

struct TestingReport {
  double T = 0.0;
  double Tstar = 0.0;
  CubeId argmax_T;
  CubeId argmax_Tstar;
  AtomFunction witness_g;
  ScaleFunction witness_f;
};

// Ratio for a single cube.
double forward_testing_ratio(const Instance& inst, CubeId q);
double dual_testing_ratio(const Instance& inst, CubeId q);

// K_Q(a, j) = mu(a, j) * sum_{Q' in Q, (a, j) in box(Q')} lambda_Q' omega(Q').
ScaleFunction dual_testing_kernel(const Instance& inst, CubeId q);

ForwardTesting testing_constant_T(const Instance& inst);
DualTesting testing_constant_Tstar(const Instance& inst);
TestingReport testing_report(const Instance& inst);

}  // namespace dyadic
