#include "dyadic/testing.hpp"

#include <cmath>

namespace dyadic {

double forward_testing_ratio(const Instance& inst, CubeId q) {
  const ScaleFunction phi = test_function(inst, q);
  const double phi_norm = mixed_norm(phi, inst.sigma, inst.p.p());
  if (!(phi_norm > 0.0)) return 0.0;
  const AtomFunction h = apply_Tsigma_local(inst, phi, q);
  return lp_norm(h, inst.omega, inst.p.p()) / phi_norm;
}

ScaleFunction dual_testing_kernel(const Instance& inst, CubeId q) {
  return apply_Tomega_local(inst, indicator(inst.sys, q), q);
}

double dual_testing_ratio(const Instance& inst, CubeId q) {
  const double w = mass(inst.sys, inst.omega, q);
  if (!(w > 0.0)) return 0.0;
  const ScaleFunction k = dual_testing_kernel(inst, q);
  const double q_conj = inst.p.conjugate();
  return mixed_norm(k, inst.sigma, q_conj) / std::pow(w, 1.0 / q_conj);
}

ForwardTesting testing_constant_T(const Instance& inst) {
  const auto& sys = inst.sys;
  ForwardTesting out;
  out.argmax = sys.root();
  out.per_cube.assign(sys.num_cubes(), 0.0);
  for (std::size_t i = 0; i < sys.num_cubes(); ++i) {
    const double r = forward_testing_ratio(inst, sys.cube(i));
    out.per_cube[i] = r;
    if (r > out.value) {
      out.value = r;
      out.argmax = sys.cube(i);
    }
  }
  const ScaleFunction phi = test_function(inst, out.argmax);
  const AtomFunction h = apply_Tsigma_local(inst, phi, out.argmax);
  norming_atom_function(h, inst.omega, inst.p, out.witness_g);
  return out;
}

DualTesting testing_constant_Tstar(const Instance& inst) {
  const auto& sys = inst.sys;
  DualTesting out;
  out.argmax = sys.root();
  out.per_cube.assign(sys.num_cubes(), 0.0);
  for (std::size_t i = 0; i < sys.num_cubes(); ++i) {
    const double r = dual_testing_ratio(inst, sys.cube(i));
    out.per_cube[i] = r;
    if (r > out.value) {
      out.value = r;
      out.argmax = sys.cube(i);
    }
  }
  norming_scale_function(dual_testing_kernel(inst, out.argmax), inst.sigma, inst.p, out.witness_f);
  return out;
}

TestingReport testing_report(const Instance& inst) {
  ForwardTesting t = testing_constant_T(inst);
  DualTesting ts = testing_constant_Tstar(inst);
  return TestingReport{t.value, ts.value, t.argmax, ts.argmax, std::move(t.witness_g), std::move(ts.witness_f)};
}

}  // namespace dyadic
