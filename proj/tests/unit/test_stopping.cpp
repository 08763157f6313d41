#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "dyadic/errors.hpp"
#include "dyadic/stopping.hpp"
#include "helpers.hpp"
#include "oracles/oracles.hpp"

using namespace dyadic;
using test::near;

namespace {

// The maximal strict subcubes of `parent` satisfying `rule`, found by
// scanning every cube.
template <class Rule>
std::set<CubeId> maximal_hits(const DyadicSystem& sys, CubeId parent, Rule rule) {
  std::set<CubeId> hits;
  for (const CubeId q : sys.cubes())
    if (q != parent && sys.contains(parent, q) && rule(q)) hits.insert(q);
  std::set<CubeId> maximal;
  for (const CubeId q : hits) {
    bool covered = false;
    for (const CubeId r : hits) covered |= (r != q && sys.contains(r, q));
    if (!covered) maximal.insert(q);
  }
  return maximal;
}

void check_g_family_by_brute_force(const Instance& in, const AtomFunction& g, const StoppingFamily& fam) {
  const AtomFunction one(in.sys.num_atoms(), 1.0);
  auto avg = [&](CubeId q) {
    const double m = oracle::cube(in.sys, one, in.omega, q);
    return m > 0.0 ? oracle::cube(in.sys, g, in.omega, q) / m : 0.0;
  };
  for (const CubeId m : fam.members()) {
    const auto expect = maximal_hits(in.sys, m, [&](CubeId q) { return avg(q) > 2.0 * avg(m); });
    const auto& kids = fam.stopping_children(m);
    CHECK(std::set<CubeId>(kids.begin(), kids.end()) == expect);
  }
}

void check_f_family_by_brute_force(const Instance& in, const ScaleFunction& f, const StoppingFamily& fam) {
  for (const CubeId m : fam.members()) {
    const ScaleFunction phi = oracle::phi(in, m);
    const double num_f = oracle::box(in, f, m);
    const double den_f = oracle::box(in, phi, m);
    const auto expect = maximal_hits(in.sys, m, [&](CubeId q) {
      const double den = oracle::box(in, phi, q);
      return den > 0.0 && den_f > 0.0 && oracle::box(in, f, q) / den > fam.params().A * (num_f / den_f);
    });
    const auto& kids = fam.stopping_children(m);
    // The oracle sums in a different order; only compare when no candidate
    // sits within rounding of the threshold.
    CHECK(std::set<CubeId>(kids.begin(), kids.end()) == expect);
  }
}

}  // namespace

TEST_CASE("default F-type constants") {
  const FParams two = default_f_params(Exponent(2.0));
  CHECK(two.B == doctest::Approx(2.0));
  CHECK(two.A == doctest::Approx(4.0));
  for (const double p : {2.0, 2.5, 3.0, 4.0, 10.0}) {
    const Exponent e(p);
    const FParams k = default_f_params(e);
    const double q = e.conjugate();
    CHECK(std::pow(k.B, -q) + std::pow(k.B, 2.0 - q) / k.A == doctest::Approx(0.5));
  }
}

TEST_CASE("G-type families on the two-atom lattice") {
  const Instance w1 = worked_w1();
  const CubeId left = w1.sys.cube_from_path("0");
  const StoppingFamily flat = build_G_family(w1, w1.sys.root(), AtomFunction(2, 1.0));
  CHECK(flat.members() == std::vector<CubeId>{w1.sys.root()});
  CHECK(flat.pi(left) == w1.sys.root());
  CHECK(carleson_constant(w1.sys, flat, w1.omega).value == 1.0);

  Instance heavy = w1;
  heavy.omega = Weights(std::vector<double>{1.0, 2.0});
  AtomFunction g(std::vector<double>{3.0, 0.0});
  CHECK(average(heavy.sys, g, heavy.omega, heavy.sys.root()) == 1.0);
  const StoppingFamily stop = build_G_family(heavy, heavy.sys.root(), g);
  CHECK(stop.members() == std::vector<CubeId>{heavy.sys.root(), left});
  CHECK(stop.generation(left) == 1);
  CHECK(stop.stopping_parent(left) == heavy.sys.root());
  CHECK(carleson_constant(w1.sys, stop, w1.omega).value == 1.5);

  Instance null_omega = w1;
  null_omega.omega = Weights(2, 0.0);
  CHECK(build_G_family(null_omega, w1.sys.root(), g).size() == 1);
}

TEST_CASE("F-type families on the two-atom lattice") {
  const Instance w1 = worked_w1();
  const ScaleFunction one = ScaleFunction::constant(w1.sys, 1.0);
  CHECK(build_F_family(w1, w1.sys.root(), one).size() == 1);
  CHECK(build_F_family(w1, w1.sys.root(), ScaleFunction::zeros(w1.sys)).size() == 1);
  CHECK(bracket(w1, one, w1.sys.root()) == 1.0);

  // Mass M on the single cell of box(left): M / 1 equals 4 * (M / 4) and
  // equality never stops.
  ScaleFunction spike = ScaleFunction::zeros(w1.sys);
  spike(0, 1) = 7.0;
  CHECK(build_F_family(w1, w1.sys.root(), spike).size() == 1);

  Instance no_mu = w1;
  no_mu.mu = ScaleFunction::zeros(w1.sys);
  CHECK(bracket(no_mu, one, w1.sys.root()) == 0.0);

  CHECK_THROWS_AS(build_F_family(w1, w1.sys.root(), one, FParams{0.0, 1.0}), PreconditionError);
  CHECK_THROWS_AS(build_F_family(w1, w1.sys.root(), one, FParams{-1.0, 1.0}), PreconditionError);
  CHECK_THROWS_AS(build_F_family(w1, w1.sys.root(), one, FParams{NAN, 1.0}), PreconditionError);
}

TEST_CASE("a spike forces a chain of F-type stopping cubes") {
  // Unit sigma and mu, p = 2: the ratio of a cube at level l containing the
  // spike is 1 / (2^{5-l} (6-l)); stopping happens at levels 2 and 4.
  DyadicSystem sys(1, 5);
  std::vector<double> lambda(sys.num_cubes(), 1.0);
  const Instance in = make_instance(sys, 2.0, Weights(sys.num_atoms(), 1.0), Weights(sys.num_atoms(), 1.0),
                                    ScaleFunction::constant(sys, 1.0), lambda);
  ScaleFunction f = ScaleFunction::zeros(in.sys);
  f(0, 5) = 1.0;
  const StoppingFamily fam = build_F_family(in, in.sys.root(), f);
  CHECK(fam.members() == std::vector<CubeId>{CubeId{0, 0}, CubeId{2, 0}, CubeId{4, 0}});
  CHECK(fam.num_generations() == 3);
  CHECK(fam.pi(CubeId{5, 0}) == CubeId{4, 0});
  CHECK(fam.pi(CubeId{3, 1}) == CubeId{2, 0});
  CHECK(fam.pi(CubeId{1, 1}) == CubeId{0, 0});
  CHECK(f_stopping_violations(in, f, fam) == 0);
  check_f_family_by_brute_force(in, f, fam);
}

TEST_CASE("projection outside the top cube is rejected") {
  const Instance in = generate(GenSpec{.seed = 3, .dimension = 1, .depth = 3});
  const CubeId top = in.sys.cube_from_path("1");
  const StoppingFamily fam = build_G_family(in, top, AtomFunction(in.sys.num_atoms(), 1.0));
  CHECK_THROWS_AS(fam.pi(in.sys.cube_from_path("0/1")), DomainError);
  CHECK_THROWS_AS(fam.pi(in.sys.root()), DomainError);
  CHECK(fam.pi(in.sys.cube_from_path("1/0")) == top);
  CHECK_THROWS_AS(fam.stopping_children(in.sys.root()), DomainError);
}

TEST_CASE("E-sets and starred children") {
  const Instance w1 = worked_w1();
  const CubeId left = w1.sys.cube_from_path("0");
  StoppingFamily single(FamilyKind::F, w1.sys.root(), 1);
  CHECK(E_hat(w1.sys, single, w1.sys.root()).size() == 4);
  CHECK(E_flat(w1.sys, single, w1.sys.root()).size() == 2);
  CHECK(ch_star(w1.sys, single, single, w1.sys.root()).empty());

  StoppingFamily two(FamilyKind::F, w1.sys.root(), 1);
  two.add_child(w1.sys.root(), left);
  CHECK(E_hat(w1.sys, two, w1.sys.root()).size() == 3);
  CHECK(E_flat(w1.sys, two, w1.sys.root()) == std::vector<std::size_t>{1});
  CHECK(ch_star(w1.sys, two, single, w1.sys.root()) == std::vector<CubeId>{left});
  CHECK(ch_star(w1.sys, two, two, w1.sys.root()) == std::vector<CubeId>{left});

  // Singleton families leave f and g unchanged.
  Rng rng(5);
  const ScaleFunction f = random_scale_function(w1.sys, rng);
  const AtomFunction g = random_atom_function(w1.sys, rng);
  CHECK(decompose_fG(w1, f, single, single, w1.sys.root()) == f);
  CHECK(decompose_gF(w1, g, single, single, w1.sys.root()) == g);
  const ScaleFunction zero = decompose_fG(w1, ScaleFunction::zeros(w1.sys), single, single, w1.sys.root());
  for (const double v : zero.values()) CHECK(v == 0.0);
  CHECK_THROWS_AS(decompose_fG(w1, f, single, single, left), DomainError);
}

TEST_CASE("property: stopping families on random data") {
  for (const double p : {2.0, 3.0, 4.0}) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const Instance in = test::small_instance(seed * 7 + static_cast<std::uint64_t>(p), p, 4, 0.1);
      Rng rng(seed);
      const ScaleFunction f = random_scale_function(in.sys, rng, Range{1e-4, 1.0}, 0.3);
      const AtomFunction g = random_atom_function(in.sys, rng, Range{1e-4, 1.0}, 0.3);
      const StoppingFamily gf = build_G_family(in, in.sys.root(), g);
      const StoppingFamily ff = build_F_family(in, in.sys.root(), f);
      CHECK(check_structure(in.sys, gf).empty());
      CHECK(check_structure(in.sys, ff).empty());
      CHECK(g_stopping_violations(in, g, gf) == 0);
      CHECK(f_stopping_violations(in, f, ff) == 0);
      check_g_family_by_brute_force(in, g, gf);
      const CarlesonConstant c = carleson_constant(in.sys, gf, in.omega);
      CHECK_FALSE(c.infinite);
      CHECK(c.value <= 2.0);
      const FamilyMassRatios m = f_family_mass_ratios(in, ff);
      CHECK_FALSE(m.degenerate);
      CHECK(m.sparse <= 0.5 * (1 + 1e-12));
      CHECK(m.geometric <= 2.0 * (1 + 1e-12));
      const DecompositionCheck d = check_decompositions(in, f, g, gf, ff);
      CHECK(d.dichotomy_holds);
      CHECK(d.max_f_error <= 1e-12);
      CHECK(d.max_g_error <= 1e-12);
      CHECK(d.cubes == in.sys.num_cubes());
    }
  }
}

TEST_CASE("property: decomposition identities with nontrivial stopping children") {
  std::size_t f_checks = 0;
  std::size_t g_checks = 0;
  for (const double p : {2.0, 3.0, 4.0}) {
    for (const int depth : {3, 4, 5}) {
      AdversarialParams params;
      params.seed = static_cast<std::uint64_t>(depth * 10 + static_cast<int>(p));
      params.depth = depth;
      params.p = p;
      params.count = 6;
      for (const Instance& in : adversarial_family("deep-chain", params)) {
        Rng rng(params.seed);
        const ScaleFunction f = deep_chain_f(in.sys, rng);
        const AtomFunction g = deep_chain_g(in.sys, rng);
        const StoppingFamily gf = build_G_family(in, in.sys.root(), g);
        const StoppingFamily ff = build_F_family(in, in.sys.root(), f);
        CHECK(ff.num_generations() >= 2);
        CHECK(gf.num_generations() >= 2);
        check_f_family_by_brute_force(in, f, ff);
        check_g_family_by_brute_force(in, g, gf);
        const DecompositionCheck d = check_decompositions(in, f, g, gf, ff);
        CHECK(d.dichotomy_holds);
        CHECK(d.max_f_error <= 1e-12);
        CHECK(d.max_g_error <= 1e-12);
        f_checks += d.f_identities;
        g_checks += d.g_identities;
      }
    }
  }
  CHECK(f_checks > 0);
  CHECK(g_checks > 0);
}
