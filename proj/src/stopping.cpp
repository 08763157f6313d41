#include "dyadic/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "dyadic/errors.hpp"
#include "dyadic/numeric.hpp"

namespace dyadic {

FParams default_f_params(const Exponent& p) {
  const double q = p.conjugate();
  const double b = std::pow(4.0, 1.0 / q);
  return FParams{4.0 * std::pow(b, 2.0 - q), b};
}

StoppingFamily::StoppingFamily(FamilyKind kind, CubeId top, int dimension, FParams params)
    : kind_(kind), top_(top), dimension_(dimension), params_(params) {
  nodes_.emplace(top, Node{});
  order_.push_back(top);
}

const StoppingFamily::Node& StoppingFamily::node(CubeId member) const {
  const auto it = nodes_.find(member);
  if (it == nodes_.end()) throw DomainError("cube is not a member of the stopping family");
  return it->second;
}

const std::vector<CubeId>& StoppingFamily::stopping_children(CubeId member) const {
  return node(member).children;
}

std::optional<CubeId> StoppingFamily::stopping_parent(CubeId member) const { return node(member).parent; }

int StoppingFamily::generation(CubeId member) const { return node(member).generation; }

CubeId StoppingFamily::pi(CubeId q) const {
  if (q.level < top_.level || (q.code >> (dimension_ * (q.level - top_.level))) != top_.code) {
    throw DomainError("cube lies outside the top cube of the family");
  }
  while (!nodes_.count(q)) q = CubeId{q.level - 1, q.code >> dimension_};
  return q;
}

void StoppingFamily::add_child(CubeId parent, CubeId child) {
  Node& p = nodes_.at(parent);
  p.children.push_back(child);
  Node n;
  n.parent = parent;
  n.generation = p.generation + 1;
  generations_ = std::max(generations_, n.generation + 1);
  nodes_.emplace(child, std::move(n));
  order_.push_back(child);
}

namespace {

// Generic maximal-cube selection: `stops(parent, q)` decides whether the
// strict subcube q of parent is a stopping child.
template <class Stops>
void grow(const DyadicSystem& sys, StoppingFamily& family, Stops&& stops) {
  std::vector<CubeId> generation{family.top()};
  while (!generation.empty()) {
    std::vector<std::pair<CubeId, CubeId>> found;
    for (const CubeId parent : generation) {
      std::vector<CubeId> frontier = sys.children(parent);
      while (!frontier.empty()) {
        std::vector<CubeId> next;
        for (const CubeId q : frontier) {
          if (stops(parent, q)) {
            found.emplace_back(parent, q);
          } else if (q.level < sys.depth()) {
            for (const CubeId c : sys.children(q)) next.push_back(c);
          }
        }
        frontier = std::move(next);
      }
    }
    std::sort(found.begin(), found.end(), [&](const auto& a, const auto& b) {
      return sys.ordinal_unchecked(a.second) < sys.ordinal_unchecked(b.second);
    });
    generation.clear();
    for (const auto& [parent, child] : found) {
      family.add_child(parent, child);
      generation.push_back(child);
    }
  }
}

std::vector<double> averages(const Instance& inst, const AtomFunction& g) {
  const auto ints = cube_integrals(inst.sys, g, inst.omega);
  const auto ms = masses(inst.sys, inst.omega);
  std::vector<double> out(ints.size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ms[i] > 0.0 ? ints[i] / ms[i] : 0.0;
  return out;
}

std::optional<double> ratio(double num, double den) {
  if (!(den > 0.0)) return std::nullopt;
  return num / den;
}

// The F-type rule for a candidate with ratio `rq` against a parent with
// ratio `rf`; shared by the builder and the property check.
bool f_rule_exceeds(std::optional<double> rq, std::optional<double> rf, double a) {
  return rq && rf && *rq > a * *rf;
}

std::vector<double> phi_denominators(const Instance& inst, CubeId member) {
  return box_integrals(inst.sys, test_function(inst, member), inst.mu, inst.sigma, member);
}

}  // namespace

StoppingFamily build_G_family(const Instance& inst, CubeId top, const AtomFunction& g) {
  const auto& sys = inst.sys;
  sys.ordinal(top);
  require_nonnegative_finite(g.values(), "g");
  const std::vector<double> avg = averages(inst, g);
  StoppingFamily family(FamilyKind::G, top, sys.dimension(), FParams{2.0, 0.0});
  grow(sys, family, [&](CubeId parent, CubeId q) {
    return avg[sys.ordinal_unchecked(q)] > 2.0 * avg[sys.ordinal_unchecked(parent)];
  });
  return family;
}

StoppingFamily build_F_family(const Instance& inst, CubeId top, const ScaleFunction& f, FParams params) {
  const auto& sys = inst.sys;
  sys.ordinal(top);
  if (!std::isfinite(params.A) || !(params.A > 0.0)) throw PreconditionError("stopping constant A must be > 0");
  require_nonnegative_finite(f.values(), "f");
  const std::vector<double> num = box_integrals(sys, f, inst.mu, inst.sigma, top);
  StoppingFamily family(FamilyKind::F, top, sys.dimension(), params);
  std::map<CubeId, std::vector<double>> den;
  grow(sys, family, [&](CubeId parent, CubeId q) {
    auto it = den.find(parent);
    if (it == den.end()) it = den.emplace(parent, phi_denominators(inst, parent)).first;
    const std::size_t op = sys.ordinal_unchecked(parent);
    const std::size_t oq = sys.ordinal_unchecked(q);
    return f_rule_exceeds(ratio(num[oq], it->second[oq]), ratio(num[op], it->second[op]), params.A);
  });
  return family;
}

StoppingFamily build_F_family(const Instance& inst, CubeId top, const ScaleFunction& f) {
  return build_F_family(inst, top, f, default_f_params(inst.p));
}

double bracket(const Instance& inst, const ScaleFunction& f, CubeId q) {
  const double num = box_integral(inst.sys, f, inst.mu, inst.sigma, q);
  const double den = box_integral(inst.sys, test_function(inst, q), inst.mu, inst.sigma, q);
  return den > 0.0 ? num / den : 0.0;
}

CarlesonConstant carleson_constant(const DyadicSystem& sys, const StoppingFamily& family, const Weights& w) {
  CarlesonConstant out;
  for (const CubeId f : family.members()) {
    double below = 0.0;
    for (const CubeId g : family.members()) {
      if (sys.contains(f, g)) below += mass(sys, w, g);
    }
    const double top_mass = mass(sys, w, f);
    if (top_mass > 0.0) {
      out.value = std::max(out.value, below / top_mass);
    } else if (below > 0.0) {
      out.infinite = true;
    }
  }
  return out;
}

std::vector<CubeId> ch_star(const DyadicSystem& sys, const StoppingFamily& family_a,
                            const StoppingFamily& family_b, CubeId member) {
  std::vector<CubeId> out;
  for (const CubeId c : family_a.stopping_children(member)) {
    if (sys.contains(member, family_b.pi(c))) out.push_back(c);
  }
  return out;
}

namespace {

// For each atom of `member`, the first level excluded by a stopping child
// (depth + 1 when the atom lies in no child).
std::vector<int> excluded_from(const DyadicSystem& sys, const StoppingFamily& family, CubeId member) {
  std::vector<int> excl(sys.atom_count(member), sys.depth() + 1);
  const std::size_t b = sys.atom_begin(member);
  for (const CubeId c : family.stopping_children(member)) {
    for (std::size_t a = sys.atom_begin(c); a < sys.atom_end(c); ++a) excl[a - b] = c.level;
  }
  return excl;
}

}  // namespace

std::vector<Cell> E_hat(const DyadicSystem& sys, const StoppingFamily& family, CubeId member) {
  const std::vector<int> excl = excluded_from(sys, family, member);
  const std::size_t b = sys.atom_begin(member);
  std::vector<Cell> out;
  for (int j = member.level; j <= sys.depth(); ++j) {
    for (std::size_t a = b; a < sys.atom_end(member); ++a) {
      if (j < excl[a - b]) out.push_back(Cell{a, j});
    }
  }
  return out;
}

std::vector<std::size_t> E_flat(const DyadicSystem& sys, const StoppingFamily& family, CubeId member) {
  const std::vector<int> excl = excluded_from(sys, family, member);
  const std::size_t b = sys.atom_begin(member);
  std::vector<std::size_t> out;
  for (std::size_t a = b; a < sys.atom_end(member); ++a) {
    if (excl[a - b] > sys.depth()) out.push_back(a);
  }
  return out;
}

ScaleFunction decompose_fG(const Instance& inst, const ScaleFunction& f, const StoppingFamily& g_family,
                           const StoppingFamily& f_family, CubeId g_member) {
  const auto& sys = inst.sys;
  const std::vector<Cell> e = E_hat(sys, g_family, g_member);
  ScaleFunction out = restrict_to_cells(f, e);
  for (const CubeId child : ch_star(sys, g_family, f_family, g_member)) {
    const ScaleFunction phi = test_function(inst, f_family.pi(child));
    const double num = box_integral(sys, f, inst.mu, inst.sigma, child);
    const double den = box_integral(sys, phi, inst.mu, inst.sigma, child);
    const double coeff = den > 0.0 ? num / den : 0.0;
    for (int j = child.level; j <= sys.depth(); ++j) {
      for (std::size_t a = sys.atom_begin(child); a < sys.atom_end(child); ++a) out(a, j) += coeff * phi(a, j);
    }
  }
  return out;
}

AtomFunction decompose_gF(const Instance& inst, const AtomFunction& g, const StoppingFamily& g_family,
                          const StoppingFamily& f_family, CubeId f_member) {
  const auto& sys = inst.sys;
  AtomFunction out(sys.num_atoms());
  for (const std::size_t a : E_flat(sys, f_family, f_member)) out[a] = g[a];
  for (const CubeId child : ch_star(sys, f_family, g_family, f_member)) {
    const double avg = average(sys, g, inst.omega, child);
    for (std::size_t a = sys.atom_begin(child); a < sys.atom_end(child); ++a) out[a] += avg;
  }
  return out;
}

std::string check_structure(const DyadicSystem& sys, const StoppingFamily& family) {
  const auto& members = family.members();
  if (members.empty() || members.front() != family.top()) return "top is not the first member";
  if (family.stopping_parent(family.top())) return "top has a stopping parent";
  std::map<CubeId, int> claimed;
  for (const CubeId m : members) {
    if (!sys.valid(m)) return "member outside the system";
    if (!sys.contains(family.top(), m)) return "member outside the top cube";
    const auto& kids = family.stopping_children(m);
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (!family.contains(kids[i])) return "stopping child is not a member";
      if (!(kids[i].level > m.level && sys.contains(m, kids[i]))) return "stopping child is not a strict subcube";
      if (family.stopping_parent(kids[i]) != m) return "stopping child points to another parent";
      ++claimed[kids[i]];
      for (std::size_t k = i + 1; k < kids.size(); ++k) {
        if (sys.contains(kids[i], kids[k]) || sys.contains(kids[k], kids[i])) return "stopping children overlap";
      }
    }
  }
  for (const CubeId m : members) {
    if (m == family.top()) continue;
    if (claimed[m] != 1) return "member is not the stopping child of exactly one member";
  }
  return {};
}

std::size_t g_stopping_violations(const Instance& inst, const AtomFunction& g, const StoppingFamily& family) {
  const auto& sys = inst.sys;
  const std::vector<double> avg = averages(inst, g);
  std::size_t bad = 0;
  for (const CubeId q : sys.subcubes(family.top())) {
    const CubeId owner = family.pi(q);
    if (avg[sys.ordinal_unchecked(q)] > 2.0 * avg[sys.ordinal_unchecked(owner)]) ++bad;
  }
  return bad;
}

std::size_t f_stopping_violations(const Instance& inst, const ScaleFunction& f, const StoppingFamily& family) {
  const auto& sys = inst.sys;
  const std::vector<double> num = box_integrals(sys, f, inst.mu, inst.sigma, family.top());
  std::map<CubeId, std::vector<double>> den;
  for (const CubeId m : family.members()) den.emplace(m, phi_denominators(inst, m));
  std::size_t bad = 0;
  for (const CubeId q : sys.subcubes(family.top())) {
    const CubeId owner = family.pi(q);
    const auto& d = den.at(owner);
    const std::size_t oq = sys.ordinal_unchecked(q);
    const std::size_t of = sys.ordinal_unchecked(owner);
    if (f_rule_exceeds(ratio(num[oq], d[oq]), ratio(num[of], d[of]), family.params().A)) ++bad;
  }
  return bad;
}

FamilyMassRatios f_family_mass_ratios(const Instance& inst, const StoppingFamily& family) {
  const auto& sys = inst.sys;
  std::map<CubeId, double> m;
  for (const CubeId c : family.members()) m.emplace(c, phi_norm_pow(inst, c));
  FamilyMassRatios out;
  for (const CubeId f : family.members()) {
    double children = 0.0;
    for (const CubeId c : family.stopping_children(f)) children += m.at(c);
    double below = 0.0;
    for (const CubeId c : family.members()) {
      if (sys.contains(f, c)) below += m.at(c);
    }
    const double own = m.at(f);
    if (own > 0.0) {
      out.sparse = std::max(out.sparse, children / own);
      out.geometric = std::max(out.geometric, below / own);
    } else if (below > 0.0) {
      out.degenerate = true;
    }
  }
  return out;
}

DecompositionCheck check_decompositions(const Instance& inst, const ScaleFunction& f, const AtomFunction& g,
                                        const StoppingFamily& g_family, const StoppingFamily& f_family) {
  const auto& sys = inst.sys;
  if (g_family.top() != f_family.top()) throw DomainError("families must share the top cube");
  const CubeId top = g_family.top();
  const std::vector<double> f_boxes = box_integrals(sys, f, inst.mu, inst.sigma, top);
  const std::vector<double> g_cubes = cube_integrals(sys, g, inst.omega);
  std::map<CubeId, std::vector<double>> fg_boxes;
  std::map<CubeId, std::vector<double>> gf_cubes;

  DecompositionCheck out;
  for (const CubeId q : sys.subcubes(top)) {
    const CubeId fq = f_family.pi(q);
    const CubeId gq = g_family.pi(q);
    ++out.cubes;
    const std::size_t o = sys.ordinal_unchecked(q);
    if (sys.contains(gq, fq) && fq != gq) {
      auto it = fg_boxes.find(gq);
      if (it == fg_boxes.end()) {
        const ScaleFunction fG = decompose_fG(inst, f, g_family, f_family, gq);
        it = fg_boxes.emplace(gq, box_integrals(sys, fG, inst.mu, inst.sigma, top)).first;
      }
      out.max_f_error = std::max(out.max_f_error, relative_difference(f_boxes[o], it->second[o]));
      ++out.f_identities;
    } else if (sys.contains(fq, gq)) {
      auto it = gf_cubes.find(fq);
      if (it == gf_cubes.end()) {
        const AtomFunction gF = decompose_gF(inst, g, g_family, f_family, fq);
        it = gf_cubes.emplace(fq, cube_integrals(sys, gF, inst.omega)).first;
      }
      out.max_g_error = std::max(out.max_g_error, relative_difference(g_cubes[o], it->second[o]));
      ++out.g_identities;
    } else {
      out.dichotomy_holds = false;
    }
  }
  return out;
}

}  // namespace dyadic
