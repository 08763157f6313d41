#include <doctest.h>

#include <cmath>

#include "dyadic/errors.hpp"
#include "dyadic/forms.hpp"
#include "helpers.hpp"
#include "oracles/oracles.hpp"

using namespace dyadic;
using test::near;

TEST_CASE("form on the two-atom worked instance") {
  const Instance w1 = worked_w1();
  const ScaleFunction one = ScaleFunction::constant(w1.sys, 1.0);
  const AtomFunction g(2, 1.0);
  CHECK(lambda_form(w1, one, g) == 8.0);
  CHECK(lambda_form(w1, ScaleFunction::zeros(w1.sys), g) == 0.0);
  const CubeId left = w1.sys.cube_from_path("0");
  CHECK(lambda_form_local(w1, left, one, g) == 0.0);
  CHECK(lambda_form_local(w1, w1.sys.root(), one, g) == 8.0);
  CHECK(lambda_form_local(w1, w1.sys.root(), ScaleFunction::zeros(w1.sys), g) == 0.0);

  const Instance left_only = test::with_lambda(w1, {{"0", 1.0}});
  CHECK(lambda_form(left_only, one, g) == 1.0);
}

TEST_CASE("operators on the two-atom worked instance") {
  const Instance w1 = worked_w1();
  const ScaleFunction one = ScaleFunction::constant(w1.sys, 1.0);
  const AtomFunction ts = apply_Tsigma(w1, one);
  CHECK(ts[0] == 4.0);
  CHECK(ts[1] == 4.0);
  CHECK(apply_Tsigma(w1, ScaleFunction::zeros(w1.sys))[0] == 0.0);
  const AtomFunction left = apply_Tsigma(test::with_lambda(w1, {{"0", 1.0}}), one);
  CHECK(left[0] == 1.0);
  CHECK(left[1] == 0.0);

  const ScaleFunction to = apply_Tomega(w1, AtomFunction(2, 1.0));
  for (const double v : to.values()) CHECK(v == 2.0);
  const ScaleFunction none = apply_Tomega(w1, AtomFunction(2, 0.0));
  for (const double v : none.values()) CHECK(v == 0.0);
  Instance no_mu = w1;
  no_mu.mu = ScaleFunction::zeros(w1.sys);
  const ScaleFunction masked = apply_Tomega(no_mu, AtomFunction(2, 1.0));
  for (const double v : masked.values()) CHECK(v == 0.0);
}

TEST_CASE("test functions of the worked instances") {
  const Instance w1 = worked_w1();
  const ScaleFunction phi = test_function(w1, w1.sys.root());
  for (const double v : phi.values()) CHECK(v == 1.0);

  const Instance w2 = worked_w2();
  CHECK(test_function(w2, w2.sys.root())(0, 0) == doctest::Approx(2.0).epsilon(1e-14));

  Instance no_mu = w1;
  no_mu.mu = ScaleFunction::zeros(w1.sys);
  const ScaleFunction phi0 = test_function(no_mu, no_mu.sys.root());
  for (const double v : phi0.values()) CHECK(v == 0.0);
}

TEST_CASE("identity chain on the worked instances") {
  const PhiIdentity a = phi_identity_check(worked_w1(), CubeId{});
  CHECK(a.pairing == doctest::Approx(4.0));
  CHECK(a.slice == doctest::Approx(4.0));
  CHECK(a.dual_norm == doctest::Approx(4.0));
  CHECK(a.phi_norm == doctest::Approx(4.0));

  const PhiIdentity b = phi_identity_check(worked_w2(), CubeId{});
  for (const double v : {b.pairing, b.slice, b.dual_norm, b.phi_norm}) CHECK(near(v, 16.0, 1e-12));

  Instance no_mu = worked_w1();
  no_mu.mu = ScaleFunction::zeros(no_mu.sys);
  const PhiIdentity c = phi_identity_check(no_mu, CubeId{});
  for (const double v : {c.pairing, c.slice, c.dual_norm, c.phi_norm}) CHECK(v == 0.0);
  CHECK(c.max_relative_spread() == 0.0);
}

TEST_CASE("property: form agrees with the direct definition and with both operators") {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    Rng rng(seed);
    const double p = 1.3 + 3.0 * rng.uniform();
    const Instance in = test::small_instance(seed, p);
    const ScaleFunction f = random_scale_function(in.sys, rng, Range{1e-3, 1.0}, 0.2);
    const AtomFunction g = random_atom_function(in.sys, rng, Range{1e-3, 1.0}, 0.2);
    const double lam = lambda_form(in, f, g);
    CHECK(near(lam, oracle::lambda(in, f, g), 1e-12));
    CHECK(near(lam, atom_pairing(apply_Tsigma(in, f), g, in.omega), 1e-12));
    CHECK(near(lam, scale_pairing(f, apply_Tomega(in, g), in.sigma), 1e-12));
    const CubeId q = in.sys.cube(rng.below(in.sys.num_cubes()));
    CHECK(near(lambda_form_local(in, q, f, g), oracle::lambda(in, f, g, q), 1e-12));
    CHECK(near(lambda_form_local(in, q, f, g), atom_pairing(apply_Tsigma_local(in, f, q), g, in.omega), 1e-12));
    CHECK(near(lambda_form_local(in, q, f, g), scale_pairing(f, apply_Tomega_local(in, g, q), in.sigma), 1e-12));

    // Enlarging one coefficient never lowers the form.
    Instance bigger = in;
    bigger.lambda[rng.below(in.sys.num_cubes())] += 1.0;
    CHECK(lambda_form(bigger, f, g) >= lam);
  }
}

TEST_CASE("property: test functions and the identity chain") {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    Rng rng(seed);
    const double p = 1.3 + 3.0 * rng.uniform();
    const Instance in = test::small_instance(seed, p, 3, 0.2);
    for (const CubeId q : in.sys.cubes()) {
      const ScaleFunction phi = test_function(in, q);
      const ScaleFunction ref = oracle::phi(in, q);
      for (std::size_t i = 0; i < phi.size(); ++i) CHECK(near(phi.values()[i], ref.values()[i], 1e-13));
      CHECK(phi_identity_check(in, q).max_relative_spread() <= 1e-10);
      CHECK(near(phi_norm_pow(in, q), oracle::mixed_pow(ref, in.sigma, p), 1e-12));
    }
  }
}

TEST_CASE("norming functions") {
  const Instance w1 = worked_w1();
  AtomFunction g;
  CHECK(norming_atom_function(AtomFunction(2, 4.0), w1.omega, w1.p, g));
  CHECK(g[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_FALSE(norming_atom_function(AtomFunction(2, 0.0), w1.omega, w1.p, g));
  CHECK(g[0] == 0.0);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const Exponent p(1.2 + 3.0 * rng.uniform());
    const Instance in = test::small_instance(seed, p.p());
    const AtomFunction h = random_atom_function(in.sys, rng, Range{1e-3, 1.0}, 0.2);
    AtomFunction out;
    if (norming_atom_function(h, in.omega, p, out)) {
      CHECK(near(lp_norm(out, in.omega, p.conjugate()), 1.0, 1e-12));
      CHECK(near(atom_pairing(out, h, in.omega), lp_norm(h, in.omega, p.p()), 1e-12));
    }
    const ScaleFunction k = random_scale_function(in.sys, rng, Range{1e-3, 1.0}, 0.2);
    ScaleFunction f;
    if (norming_scale_function(k, in.sigma, p, f)) {
      CHECK(near(mixed_norm(f, in.sigma, p.p()), 1.0, 1e-12));
      CHECK(near(scale_pairing(f, k, in.sigma), mixed_norm(k, in.sigma, p.conjugate()), 1e-12));
    }
  }
}

TEST_CASE("instance validation") {
  Instance w1 = worked_w1();
  CHECK_NOTHROW(validate(w1));
  Instance bad = w1;
  bad.lambda.pop_back();
  CHECK_THROWS_AS(validate(bad), PreconditionError);
  bad = w1;
  bad.sigma[0] = -1.0;
  CHECK_THROWS_AS(validate(bad), DomainError);
  bad = w1;
  bad.mu(0, 0) = NAN;
  CHECK_THROWS_AS(validate(bad), DomainError);
}
