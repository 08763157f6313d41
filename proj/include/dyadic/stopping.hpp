#pragma once
// Stopping-cube families.
//
// G-type (driven by g >= 0 on atoms): the stopping children of G are the
// maximal strict subcubes Q with <g>^omega_Q > 2 <g>^omega_G.
//
// F-type (driven by f >= 0 on cells): the stopping children of F are the
// maximal strict subcubes Q with
//
//   box(f mu, Q) / box(phi_F mu, Q)  >  A * box(f mu, F) / box(phi_F mu, F).
//
// A ratio 0/0 never stops, and equality never stops. Both constructions
// search top-down, breadth first, and stop descending at the first hit.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dyadic/forms.hpp"

namespace dyadic {

enum class FamilyKind { G, F };

// Constants of the F-type stopping rule. B only enters the sparseness
// argument; it is carried along so reports can quote it.
struct FParams {
  double A = 0.0;
  double B = 0.0;
};

// B = 4^{1/p'}, A = 4 B^{2 - p'}.
FParams default_f_params(const Exponent& p);

class StoppingFamily {
 public:
  StoppingFamily(FamilyKind kind, CubeId top, int dimension, FParams params = {});

  FamilyKind kind() const noexcept { return kind_; }
  CubeId top() const noexcept { return top_; }
  const FParams& params() const noexcept { return params_; }

  // Members in generation order; within a generation, in enumeration order.
  const std::vector<CubeId>& members() const noexcept { return order_; }
  std::size_t size() const noexcept { return order_.size(); }
  bool contains(CubeId q) const { return nodes_.count(q) != 0; }

  // Throws DomainError for a non-member.
  const std::vector<CubeId>& stopping_children(CubeId member) const;
  std::optional<CubeId> stopping_parent(CubeId member) const;
  int generation(CubeId member) const;
  int num_generations() const noexcept { return generations_; }

  // Smallest member containing q. Throws DomainError if q is not inside top.
  CubeId pi(CubeId q) const;

  // Used by the builders.
  void add_child(CubeId parent, CubeId child);

 private:
  struct Node {
    std::optional<CubeId> parent;
    std::vector<CubeId> children;
    int generation = 0;
  };
  const Node& node(CubeId member) const;

  FamilyKind kind_;
  CubeId top_;
  int dimension_;
  FParams params_;
  std::map<CubeId, Node> nodes_;
  std::vector<CubeId> order_;
  int generations_ = 1;
};

StoppingFamily build_G_family(const Instance& inst, CubeId top, const AtomFunction& g);
// Throws PreconditionError unless A is finite and > 0.
StoppingFamily build_F_family(const Instance& inst, CubeId top, const ScaleFunction& f, FParams params);
StoppingFamily build_F_family(const Instance& inst, CubeId top, const ScaleFunction& f);

// [f]_Q = box(f mu, Q) / box(phi_Q mu, Q), 0/0 -> 0.
double bracket(const Instance& inst, const ScaleFunction& f, CubeId q);

struct CarlesonConstant {
  double value = 0.0;
  // A zero-mass member carries positive-mass members below it.
  bool infinite = false;
};

// max over members F of sum_{F' member, F' in F} w(F') / w(F).
CarlesonConstant carleson_constant(const DyadicSystem& sys, const StoppingFamily& family, const Weights& w);

// Stopping children of `member` in family_a whose projection onto family_b
// lies inside `member`.
std::vector<CubeId> ch_star(const DyadicSystem& sys, const StoppingFamily& family_a,
                            const StoppingFamily& family_b, CubeId member);
// box(F) minus the boxes of its stopping children.
std::vector<Cell> E_hat(const DyadicSystem& sys, const StoppingFamily& family, CubeId member);
// F minus its stopping children.
std::vector<std::size_t> E_flat(const DyadicSystem& sys, const StoppingFamily& family, CubeId member);

// f_G = 1_{E(box G)} f + sum_{G' in ch*_G(G)} (box(f mu, G') / box(phi_{pi_F G'} mu, G')) 1_{box G'} phi_{pi_F G'}
ScaleFunction decompose_fG(const Instance& inst, const ScaleFunction& f, const StoppingFamily& g_family,
                           const StoppingFamily& f_family, CubeId g_member);
// g_F = 1_{E(F)} g + sum_{F' in ch*_F(F)} <g>^omega_{F'} 1_{F'}
AtomFunction decompose_gF(const Instance& inst, const AtomFunction& g, const StoppingFamily& g_family,
                          const StoppingFamily& f_family, CubeId f_member);

// ---- structural and quantitative checks -----------------------------------

// Tree invariants: top is a member, children are pairwise disjoint strict
// subcubes, every non-top member has exactly one stopping parent. Returns an
// empty string when they hold, otherwise a description of the first failure.
std::string check_structure(const DyadicSystem& sys, const StoppingFamily& family);

// Number of cubes Q in top with <g>_Q > 2 <g>_{pi(Q)}.
std::size_t g_stopping_violations(const Instance& inst, const AtomFunction& g, const StoppingFamily& family);

// Number of cubes Q in top violating the F-type stopping property against
// F = pi(Q), using the same ratio evaluation as the builder.
std::size_t f_stopping_violations(const Instance& inst, const ScaleFunction& f, const StoppingFamily& family);

struct FamilyMassRatios {
  double sparse = 0.0;     // max_F sum_{children} ||phi_F'||^p / ||phi_F||^p
  double geometric = 0.0;  // max_F sum_{members in F} ||phi_F'||^p / ||phi_F||^p
  bool degenerate = false; // some member with ||phi_F|| = 0 carries mass below it
};

FamilyMassRatios f_family_mass_ratios(const Instance& inst, const StoppingFamily& family);

struct DecompositionCheck {
  std::size_t cubes = 0;          // cubes Q inside top that were classified
  std::size_t f_identities = 0;   // cubes with F strictly inside G
  std::size_t g_identities = 0;   // cubes with G inside F
  double max_f_error = 0.0;       // relative, box(f mu, Q) vs box(f_G mu, Q)
  double max_g_error = 0.0;       // relative, int_Q g vs int_Q g_F
  bool dichotomy_holds = true;    // F in G or G in F for every pair pi(Q)
};

DecompositionCheck check_decompositions(const Instance& inst, const ScaleFunction& f, const AtomFunction& g,
                                        const StoppingFamily& g_family, const StoppingFamily& f_family);

}  // namespace dyadic
