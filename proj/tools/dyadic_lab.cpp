// Command-line front end: instance generation, evaluation of the form and
// its constants, the property suite and experiment reports.
//
// Exit codes: 0 success, 2 schema or usage error, 3 numeric guard,
// 4 property failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dyadic/embedding.hpp"
#include "dyadic/errors.hpp"
#include "dyadic/instance_gen.hpp"
#include "dyadic/io.hpp"
#include "dyadic/norm_estimation.hpp"
#include "dyadic/suite.hpp"

namespace {

using nlohmann::json;
using namespace dyadic;

constexpr int kExitSchema = 2;
constexpr int kExitGuard = 3;
constexpr int kExitProperty = 4;

struct Flags {
  std::uint64_t seed = 1;
  std::vector<double> ps{2.0};
  int dim = 1;
  std::vector<int> depths{2};
  int instances = 20;
  int restarts = 32;
  double tol = 1e-10;
  std::string in;
  std::string out;
  std::string format = "json";
  std::string worked;
  double f_const = 1.0;
  double g_const = 1.0;
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void emit(const Flags& flags, const std::string& text) {
  if (flags.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(flags.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + flags.out);
  out << text;
}

Instance input_instance(const Flags& flags) {
  if (flags.in.empty()) throw SchemaError("", "--in is required");
  return read_instance_file(flags.in);
}

json cube_list(const DyadicSystem& sys, const std::vector<CubeId>& cubes) {
  json a = json::array();
  for (const CubeId q : cubes) a.push_back(sys.path(q));
  return a;
}

int cmd_gen(const Flags& flags) {
  Instance inst;
  if (flags.worked == "W1") {
    inst = worked_w1();
  } else if (flags.worked == "W2") {
    inst = worked_w2();
  } else if (flags.worked == "W3") {
    inst = worked_w3();
  } else if (!flags.worked.empty()) {
    throw SchemaError("--worked", "expected W1, W2 or W3");
  } else {
    GenSpec spec;
    spec.seed = flags.seed;
    spec.dimension = flags.dim;
    spec.depth = flags.depths.front();
    spec.p = flags.ps.front();
    inst = generate(spec);
  }
  emit(flags, instance_to_json(inst));
  return 0;
}

int cmd_eval(const Flags& flags) {
  const Instance inst = input_instance(flags);
  const ScaleFunction f = ScaleFunction::constant(inst.sys, flags.f_const);
  const AtomFunction g(inst.sys.num_atoms(), flags.g_const);
  require_nonnegative_finite(f.values(), "f");
  require_nonnegative_finite(g.values(), "g");
  emit(flags, num(lambda_form(inst, f, g)) + "\n");
  return 0;
}

int cmd_testing(const Flags& flags) {
  const Instance inst = input_instance(flags);
  const TestingReport t = testing_report(inst);
  json j;
  j["T"] = t.T;
  j["Tstar"] = t.Tstar;
  j["argmax_T"] = inst.sys.path(t.argmax_T);
  j["argmax_Tstar"] = inst.sys.path(t.argmax_Tstar);
  emit(flags, j.dump(2) + "\n");
  return 0;
}

int cmd_normest(const Flags& flags) {
  const Instance inst = input_instance(flags);
  NormOptions opt;
  opt.restarts = flags.restarts;
  opt.tol = flags.tol;
  opt.seed = flags.seed;
  if (flags.format == "csv") {
    std::ostringstream out;
    write_report_csv(out, {evaluate_row(inst, flags.in, flags.seed, opt)});
    emit(flags, out.str());
    return 0;
  }
  const TestingReport t = testing_report(inst);
  const NormEstimate est = estimate_norm(inst, t, opt);
  json j;
  j["T"] = t.T;
  j["Tstar"] = t.Tstar;
  j["lambda_norm_lb"] = est.value;
  j["iterations"] = est.iterations;
  j["restarts"] = est.restarts;
  j["converged"] = est.converged;
  if (inst.p.is_two()) {
    j["oracle"] = {{"kind", "spectral"}, {"value", spectral_oracle_p2(inst)}};
  } else if (grid_dof(inst) <= 6) {
    j["oracle"] = {{"kind", "grid"}, {"value", grid_oracle(inst, 12)}};
  }
  if (inst.p.p() >= 2.0) {
    const TheoremRatio r = theorem_ratio(inst, t.T, t.Tstar, est.value);
    j["ratio_upper"] = r.upper;
    j["ratio_lower"] = r.lower;
    j["degenerate"] = r.degenerate;
  }
  emit(flags, j.dump(2) + "\n");
  return 0;
}

json family_json(const DyadicSystem& sys, const StoppingFamily& fam) {
  json members = json::array();
  for (const CubeId m : fam.members()) {
    members.push_back({{"cube", sys.path(m)},
                       {"generation", fam.generation(m)},
                       {"children", cube_list(sys, fam.stopping_children(m))}});
  }
  return {{"generations", fam.num_generations()}, {"members", members}};
}

int cmd_stopping(const Flags& flags) {
  const Instance inst = input_instance(flags);
  const auto& sys = inst.sys;
  Rng rng(flags.seed);
  const ScaleFunction f = random_scale_function(sys, rng);
  const AtomFunction g = random_atom_function(sys, rng);
  const StoppingFamily gfam = build_G_family(inst, sys.root(), g);
  const StoppingFamily ffam = build_F_family(inst, sys.root(), f);
  const CarlesonConstant gc = carleson_constant(sys, gfam, inst.omega);
  const FamilyMassRatios m = f_family_mass_ratios(inst, ffam);
  json j;
  j["G"] = family_json(sys, gfam);
  j["G"]["carleson"] = gc.value;
  j["G"]["violations"] = g_stopping_violations(inst, g, gfam);
  j["F"] = family_json(sys, ffam);
  j["F"]["A"] = ffam.params().A;
  j["F"]["B"] = ffam.params().B;
  j["F"]["sparse"] = m.sparse;
  j["F"]["geometric"] = m.geometric;
  j["F"]["violations"] = f_stopping_violations(inst, f, ffam);
  emit(flags, j.dump(2) + "\n");
  return 0;
}

int cmd_embed_check(const Flags& flags) {
  const Instance inst = input_instance(flags);
  const auto& sys = inst.sys;
  Rng rng(flags.seed);

  // Carleson data of the dual testing side: a_Q = lambda_Q omega(Q), nu = omega.
  CarlesonData data;
  data.nu = inst.omega;
  const auto om = masses(sys, inst.omega);
  data.a.resize(sys.num_cubes());
  for (std::size_t o = 0; o < data.a.size(); ++o) data.a[o] = inst.lambda[o] * om[o];
  const CarlesonConstant cp = carleson_Cprime(data, sys);
  const CarlesonSearch cs = carleson_ratio_search(data, sys, inst.p.p(), flags.restarts, rng.next_u64());

  json j;
  j["Cprime"] = cp.infinite ? json("inf") : json(cp.value);
  j["C_emp"] = cs.C_emp;
  j["ratio"] = (!cp.infinite && cp.value > 0.0) ? cs.C_emp / cp.value : 0.0;
  if (inst.p.p() >= 2.0) {
    const ScaleFunction f = random_scale_function(sys, rng);
    const StoppingFamily ffam = build_F_family(inst, sys.root(), f);
    j["prop2_ratio"] = proposition2_report(inst, f, ffam).ratio;
    int violations = 0;
    for (int k = 0; k < 100; ++k) {
      const ScaleFunction fk = random_scale_function(sys, rng, Range{1e-3, 1.0}, 0.2);
      const auto part = random_partition(sys, rng, 1 + static_cast<int>(rng.below(4)), 0.2);
      if (!lemma_disjoint_check(fk, inst.sigma, inst.p.p(), part).holds) ++violations;
    }
    j["lemma1_violations"] = violations;
  } else {
    j["prop2_ratio"] = nullptr;
    j["lemma1_violations"] = nullptr;
  }
  emit(flags, j.dump(2) + "\n");
  return 0;
}

SweepOptions sweep_options(const Flags& flags) {
  SweepOptions o;
  o.seed = flags.seed;
  o.instances = flags.instances;
  o.ps = flags.ps;
  o.depths = flags.depths;
  o.dimension = flags.dim;
  o.restarts = flags.restarts;
  o.tol = flags.tol;
  for (const double p : o.ps) Exponent{p};
  for (const int d : o.depths) DyadicSystem(o.dimension, d);
  return o;
}

int cmd_verify(const Flags& flags) {
  const SweepOptions o = sweep_options(flags);
  const VerifyReport report = run_verify(o);
  emit(flags, report.text(o));
  return report.passed() ? 0 : kExitProperty;
}

int cmd_report(const Flags& flags) {
  std::vector<ReportRow> rows;
  if (!flags.in.empty()) {
    std::ifstream in(flags.in);
    if (!in) throw SchemaError("", "cannot open " + flags.in);
    rows = read_report_csv(in);
  } else {
    rows = run_sweep(sweep_options(flags));
  }
  std::ostringstream out;
  if (flags.format == "csv") {
    write_report_csv(out, rows);
    out << "\n";
  }
  out << summary_csv(summarize(rows));
  emit(flags, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiments with positive dyadic forms and their testing constants"};
  app.require_subcommand(1);
  Flags flags;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", flags.seed, "Random seed");
    sub->add_option("--p", flags.ps, "Exponent(s) p > 1")->delimiter(',');
    sub->add_option("--dim", flags.dim, "Dimension n (1..3)");
    sub->add_option("--depth", flags.depths, "Depth(s) of the lattice")->delimiter(',');
    sub->add_option("--instances", flags.instances, "Instances per (p, depth)");
    sub->add_option("--restarts", flags.restarts, "Random restarts");
    sub->add_option("--tol", flags.tol, "Relative convergence tolerance");
    sub->add_option("--in", flags.in, "Input file");
    sub->add_option("--out", flags.out, "Output file (default stdout)");
    sub->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  };

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Flags&);
  };
  const Command commands[] = {
      {"gen", "Write a random or worked instance as JSON", cmd_gen},
      {"eval", "Evaluate the form at constant f and g", cmd_eval},
      {"testing", "Testing constants T and Tstar", cmd_testing},
      {"normest", "Estimate the norm of the form", cmd_normest},
      {"stopping", "Stopping families for random f and g", cmd_stopping},
      {"embed-check", "Carleson embedding and disjointness checks", cmd_embed_check},
      {"verify", "Run the property suite", cmd_verify},
      {"report", "Sweep instances and summarise ratios per (p, depth)", cmd_report},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub);
    subs.emplace_back(sub, &c);
  }
  subs[0].first->add_option("--worked", flags.worked, "W1, W2 or W3");
  subs[1].first->add_option("--f", flags.f_const, "Constant value of f");
  subs[1].first->add_option("--g", flags.g_const, "Constant value of g");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitSchema;
  }

  try {
    for (const auto& [sub, cmd] : subs) {
      if (sub->parsed()) return cmd->run(flags);
    }
  } catch (const SchemaError& e) {
    std::cerr << "schema error at " << e.what() << "\n";
    return kExitSchema;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const IndexError& e) {
    std::cerr << "index error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const SizeLimitError& e) {
    std::cerr << "size guard: " << e.what() << "\n";
    return kExitGuard;
  } catch (const DomainError& e) {
    std::cerr << "numeric guard: " << e.what() << "\n";
    return kExitGuard;
  } catch (const PreconditionError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitSchema;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitSchema;
}
