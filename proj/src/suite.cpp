#include "dyadic/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dyadic/embedding.hpp"
#include "dyadic/errors.hpp"
#include "dyadic/instance_gen.hpp"
#include "dyadic/numeric.hpp"

namespace dyadic {

std::uint64_t instance_seed(std::uint64_t base, std::size_t p_index, int depth, int index) {
  const std::uint64_t cell = (static_cast<std::uint64_t>(p_index) << 8) | static_cast<std::uint64_t>(depth);
  return Rng(base).substream(cell).substream(static_cast<std::uint64_t>(index)).next_u64();
}

GenSpec sweep_spec(const SweepOptions& options, std::size_t p_index, int depth, int index) {
  GenSpec spec;
  spec.seed = instance_seed(options.seed, p_index, depth, index);
  spec.dimension = options.dimension;
  spec.depth = depth;
  spec.p = options.ps.at(p_index);
  spec.sparsity = 0.05;
  return spec;
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Recorder {
 public:
  void set_instance(const Instance* inst) { inst_ = inst; }

  void check(const std::string& name, bool ok, const std::string& detail = {}) {
    PropertyResult& r = results_[name];
    r.name = name;
    ++r.checks;
    if (ok) return;
    if (r.failures++ == 0) {
      r.first_failure = detail;
      if (inst_) r.instance_json = instance_to_json(*inst_);
    }
  }

  std::vector<PropertyResult> results() const {
    std::vector<PropertyResult> out;
    for (const auto& [name, r] : results_) out.push_back(r);
    return out;
  }

 private:
  std::map<std::string, PropertyResult> results_;
  const Instance* inst_ = nullptr;
};

bool close(double a, double b, double rel) { return relative_difference(a, b) <= rel; }

std::string pair_detail(double a, double b) { return fmt(a) + " vs " + fmt(b); }

void check_worked(Recorder& rec) {
  const double r2 = std::sqrt(2.0);
  const Instance w1 = worked_w1();
  rec.set_instance(&w1);
  const TestingReport t = testing_report(w1);
  rec.check("worked.w1-testing", close(t.T, 2 * r2, 1e-12) && close(t.Tstar, 2 * r2, 1e-12),
            pair_detail(t.T, t.Tstar));
  const NormEstimate est = estimate_norm(w1);
  rec.check("worked.w1-norm", close(est.value, 2 * r2, 1e-9), fmt(est.value));
  const auto ratio = theorem_ratio(w1, t.T, t.Tstar, est.value);
  rec.check("worked.w1-ratio-upper", std::fabs(ratio.upper - 0.5) <= 1e-9, fmt(ratio.upper));
  rec.check("worked.w1-phi-chain", close(phi_identity_check(w1, w1.sys.root()).pairing, 4.0, 1e-12));

  const Instance w2 = worked_w2();
  rec.set_instance(&w2);
  const PhiIdentity chain = phi_identity_check(w2, w2.sys.root());
  rec.check("worked.w2-phi-chain",
            close(chain.pairing, 16.0, 1e-10) && close(chain.slice, 16.0, 1e-10) &&
                close(chain.dual_norm, 16.0, 1e-10) && close(chain.phi_norm, 16.0, 1e-10),
            fmt(chain.pairing));

  const Instance w3 = worked_w3();
  rec.set_instance(&w3);
  const DisjointFixture fx = w3_fixture();
  for (const double p : {1.1, 1.5, 1.9}) {
    const DisjointCheck d = lemma_disjoint_check(fx.f, w3.sigma, p, fx.partition);
    rec.check("worked.w3-disjoint-violation", !d.holds, "p=" + fmt(p));
  }
  const DisjointCheck d = lemma_disjoint_check(fx.f, w3.sigma, 1.5, fx.partition);
  rec.check("worked.w3-disjoint-values", close(d.lhs, 2.0, 1e-12) && close(d.rhs, std::pow(2.0, 0.75), 1e-12),
            pair_detail(d.lhs, d.rhs));
  rec.set_instance(nullptr);
}

void check_instance(const Instance& inst, std::uint64_t seed, const SweepOptions& options, Recorder& rec) {
  const auto& sys = inst.sys;
  const double p = inst.p.p();
  const bool p_ge_2 = p >= 2.0;
  rec.set_instance(&inst);
  Rng rng(seed);

  // Generation and serialisation.
  rec.check("io.round-trip", instance_to_json(instance_from_json(instance_to_json(inst))) == instance_to_json(inst));

  // Forms.
  const ScaleFunction f = random_scale_function(sys, rng, Range{1e-3, 1.0}, 0.1);
  const AtomFunction g = random_atom_function(sys, rng, Range{1e-3, 1.0}, 0.1);
  const double lam = lambda_form(inst, f, g);
  const double via_t = atom_pairing(apply_Tsigma(inst, f), g, inst.omega);
  const double via_adj = scale_pairing(f, apply_Tomega(inst, g), inst.sigma);
  rec.check("forms.adjoint-identity", close(lam, via_t, 1e-12) && close(lam, via_adj, 1e-12),
            fmt(lam) + " " + fmt(via_t) + " " + fmt(via_adj));
  double spread = 0.0;
  for (const CubeId q : sys.cubes()) spread = std::max(spread, phi_identity_check(inst, q).max_relative_spread());
  rec.check("forms.phi-identity-chain", spread <= 1e-10, fmt(spread));

  // Testing constants against random inputs.
  const TestingReport t = testing_report(inst);
  {
    const CubeId q = sys.cube(rng.below(sys.num_cubes()));
    const ScaleFunction phi = test_function(inst, q);
    const double nphi = mixed_norm(phi, inst.sigma, p);
    const double ng = lp_norm(g, inst.omega, inst.p.conjugate());
    const double fwd = (nphi > 0.0 && ng > 0.0) ? lambda_form_local(inst, q, phi, g) / (nphi * ng) : 0.0;
    rec.check("testing.forward-bound", fwd <= t.T * (1.0 + 1e-12) + 1e-300, pair_detail(fwd, t.T));
    const AtomFunction one = indicator(sys, q);
    const double nf = mixed_norm(f, inst.sigma, p);
    const double n1 = lp_norm(one, inst.omega, inst.p.conjugate());
    const double dual = (nf > 0.0 && n1 > 0.0) ? lambda_form_local(inst, q, f, one) / (nf * n1) : 0.0;
    rec.check("testing.dual-bound", dual <= t.Tstar * (1.0 + 1e-12) + 1e-300, pair_detail(dual, t.Tstar));
  }

  // Norm estimation.
  NormOptions nopt;
  nopt.restarts = options.restarts;
  nopt.tol = options.tol;
  nopt.seed = rng.next_u64();
  const NormEstimate est = estimate_norm(inst, t, nopt);
  rec.check("norm.witness-consistency",
            close(est.value, form_ratio(inst, est.witness_f, est.witness_g), 1e-12), fmt(est.value));
  rec.check("norm.monotone", est.monotone);
  rec.check("norm.above-testing", std::max(t.T, t.Tstar) <= est.value + 1e-9,
            fmt(std::max(t.T, t.Tstar)) + " > " + fmt(est.value));
  rec.check("norm.scale-invariance",
            close(form_ratio(inst, f, g), [&] {
              ScaleFunction f3 = f;
              for (double& v : f3.values()) v *= 3.7;
              AtomFunction g3 = g;
              for (double& v : g3.values()) v *= 0.3;
              return form_ratio(inst, f3, g3);
            }(), 1e-12));
  {
    Instance doubled = inst;
    for (double& v : doubled.lambda) v *= 2.0;
    const NormEstimate est2 = estimate_norm(doubled, nopt);
    rec.check("norm.lambda-homogeneity", close(est2.value, 2.0 * est.value, 1e-8),
              pair_detail(est2.value, 2.0 * est.value));
  }
  if (p_ge_2) {
    const TheoremRatio ratio = theorem_ratio(inst, t.T, t.Tstar, est.value);
    rec.check("norm.ratio-upper", ratio.degenerate || ratio.upper >= 0.5 - 1e-9, fmt(ratio.upper));
    rec.check("norm.ratio-lower", ratio.degenerate || ratio.lower <= 1.0 + 1e-9, fmt(ratio.lower));
  }
  if (inst.p.is_two()) {
    const double spectral = spectral_oracle_p2(inst);
    rec.check("norm.spectral-agreement", close(est.value, spectral, 1e-6), pair_detail(est.value, spectral));
  }

  // Stopping families.
  const CubeId top = sys.root();
  const StoppingFamily gfam = build_G_family(inst, top, g);
  rec.check("stopping.g-structure", check_structure(sys, gfam).empty(), check_structure(sys, gfam));
  rec.check("stopping.g-property", g_stopping_violations(inst, g, gfam) == 0);
  const CarlesonConstant gc = carleson_constant(sys, gfam, inst.omega);
  rec.check("stopping.g-carleson-2", !gc.infinite && gc.value <= 2.0, fmt(gc.value));

  const StoppingFamily ffam = build_F_family(inst, top, f);
  rec.check("stopping.f-structure", check_structure(sys, ffam).empty(), check_structure(sys, ffam));
  rec.check("stopping.f-property", f_stopping_violations(inst, f, ffam) == 0);
  if (p_ge_2) {
    const FamilyMassRatios m = f_family_mass_ratios(inst, ffam);
    rec.check("stopping.f-sparse", !m.degenerate && m.sparse <= 0.5 * (1.0 + 1e-12), fmt(m.sparse));
    rec.check("stopping.f-geometric", !m.degenerate && m.geometric <= 2.0 * (1.0 + 1e-12), fmt(m.geometric));
  }
  {
    const DecompositionCheck dc = check_decompositions(inst, f, g, gfam, ffam);
    rec.check("stopping.decomposition",
              dc.dichotomy_holds && dc.max_f_error <= 1e-12 && dc.max_g_error <= 1e-12,
              pair_detail(dc.max_f_error, dc.max_g_error));
    const ScaleFunction fc = deep_chain_f(sys, rng);
    const AtomFunction gc2 = deep_chain_g(sys, rng);
    const StoppingFamily gdeep = build_G_family(inst, top, gc2);
    const StoppingFamily fdeep = build_F_family(inst, top, fc);
    const DecompositionCheck dd = check_decompositions(inst, fc, gc2, gdeep, fdeep);
    rec.check("stopping.decomposition",
              dd.dichotomy_holds && dd.max_f_error <= 1e-12 && dd.max_g_error <= 1e-12,
              pair_detail(dd.max_f_error, dd.max_g_error));
  }

  // Embeddings.
  {
    CarlesonData data = random_carleson_data(sys, rng, 0.1);
    const CarlesonConstant cp = carleson_Cprime(data, sys);
    const CarlesonSearch cs = carleson_ratio_search(data, sys, p, 2, rng.next_u64());
    rec.check("embedding.indicator-necessity", cp.infinite || cp.value <= cs.C_emp * (1.0 + 1e-12),
              pair_detail(cp.value, cs.C_emp));
  }
  if (p_ge_2) {
    for (int k = 0; k < 5; ++k) {
      const ScaleFunction fk = random_scale_function(sys, rng, Range{1e-3, 1.0}, 0.2);
      const auto part = random_partition(sys, rng, 1 + static_cast<int>(rng.below(4)), 0.2);
      const DisjointCheck d = lemma_disjoint_check(fk, inst.sigma, p, part);
      rec.check("embedding.disjointness", d.holds, pair_detail(d.lhs, d.rhs));
    }
    const Proposition2Report pr = proposition2_report(inst, f, ffam);
    rec.check("embedding.nu-carleson", !pr.nu_degenerate && pr.nu_carleson <= 4.0 * (1.0 + 1e-12),
              fmt(pr.nu_carleson));
    rec.check("embedding.alpha-reconstruction", pr.alpha_error <= 1e-12, fmt(pr.alpha_error));
    rec.check("embedding.lifted-finite", std::isfinite(pr.ratio), fmt(pr.ratio));
  }
  rec.set_instance(nullptr);
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(properties.begin(), properties.end(), [](const auto& r) { return r.failures == 0; });
}

std::string VerifyReport::text(const SweepOptions& o) const {
  std::ostringstream out;
  out << "verify seed=" << o.seed << " instances=" << o.instances << " dimension=" << o.dimension << " p=";
  for (std::size_t i = 0; i < o.ps.size(); ++i) out << (i ? "," : "") << fmt(o.ps[i]);
  out << " depth=";
  for (std::size_t i = 0; i < o.depths.size(); ++i) out << (i ? "," : "") << o.depths[i];
  out << " restarts=" << o.restarts << "\n";
  for (const auto& r : properties) {
    out << (r.failures ? "FAIL " : "PASS ") << r.name << " checks=" << r.checks;
    if (r.failures) out << " failures=" << r.failures << " first: " << r.first_failure;
    out << "\n";
  }
  for (const auto& r : properties) {
    if (r.failures && !r.instance_json.empty()) out << "violated " << r.name << " on instance:\n" << r.instance_json;
  }
  out << "result: " << (passed() ? "pass" : "fail") << "\n";
  return out.str();
}

VerifyReport run_verify(const SweepOptions& options) {
  Recorder rec;
  check_worked(rec);
  for (std::size_t pi = 0; pi < options.ps.size(); ++pi) {
    for (const int depth : options.depths) {
      for (int i = 0; i < options.instances; ++i) {
        const GenSpec spec = sweep_spec(options, pi, depth, i);
        const Instance a = generate(spec);
        const Instance b = generate(spec);
        rec.set_instance(&a);
        rec.check("gen.determinism", instance_to_json(a) == instance_to_json(b));
        check_instance(a, spec.seed, options, rec);
      }
    }
  }
  return VerifyReport{rec.results()};
}

// ---- report -----------------------------------------------------------------

ReportRow evaluate_row(const Instance& inst, const std::string& id, std::uint64_t seed, const NormOptions& norm) {
  const auto start = std::chrono::steady_clock::now();
  const auto& sys = inst.sys;
  Rng rng = Rng(seed).substream(0x7265706f7274ULL);
  ReportRow row;
  row.instance_id = id;
  row.seed = seed;
  row.p = inst.p.p();
  row.dimension = sys.dimension();
  row.depth = sys.depth();

  const TestingReport t = testing_report(inst);
  row.T = t.T;
  row.Tstar = t.Tstar;
  NormOptions nopt = norm;
  nopt.seed = rng.next_u64();
  const NormEstimate est = estimate_norm(inst, t, nopt);
  row.lambda_norm_lb = est.value;
  row.iterations = est.iterations;
  row.restarts = est.restarts;
  if (inst.p.is_two()) {
    row.oracle_value = spectral_oracle_p2(inst);
    row.oracle_kind = "spectral";
  } else if (grid_dof(inst) <= 6) {
    row.oracle_value = grid_oracle(inst, 12);
    row.oracle_kind = "grid";
  }
  if (inst.p.p() >= 2.0) {
    const TheoremRatio ratio = theorem_ratio(inst, t.T, t.Tstar, est.value);
    row.ratio_upper = ratio.upper;
    row.ratio_lower = ratio.lower;
  }

  const ScaleFunction f = random_scale_function(sys, rng);
  const AtomFunction g = random_atom_function(sys, rng);
  const StoppingFamily ffam = build_F_family(inst, sys.root(), f);
  if (inst.p.p() >= 2.0) row.prop2_ratio = proposition2_report(inst, f, ffam).ratio;
  row.f_family_sparse_max = f_family_mass_ratios(inst, ffam).sparse;
  row.g_family_carleson = carleson_constant(sys, build_G_family(inst, sys.root(), g), inst.omega).value;

  CarlesonData data;
  data.nu = inst.omega;
  const auto om = masses(sys, inst.omega);
  data.a.resize(sys.num_cubes());
  for (std::size_t o = 0; o < data.a.size(); ++o) data.a[o] = inst.lambda[o] * om[o];
  const CarlesonConstant cp = carleson_Cprime(data, sys);
  if (!cp.infinite && cp.value > 0.0) {
    row.carleson_Cemp_over_Cprime = carleson_ratio_search(data, sys, inst.p.p(), 2, rng.next_u64()).C_emp / cp.value;
  }
  row.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::vector<ReportRow> run_sweep(const SweepOptions& options) {
  std::vector<ReportRow> rows;
  NormOptions nopt;
  nopt.restarts = options.restarts;
  nopt.tol = options.tol;
  for (std::size_t pi = 0; pi < options.ps.size(); ++pi) {
    for (const int depth : options.depths) {
      for (int i = 0; i < options.instances; ++i) {
        const GenSpec spec = sweep_spec(options, pi, depth, i);
        char id[64];
        std::snprintf(id, sizeof id, "p%g-n%d-d%d-%05d", spec.p, spec.dimension, depth, i);
        rows.push_back(evaluate_row(generate(spec), id, spec.seed, nopt));
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.instance_id < b.instance_id; });
  return rows;
}

Quantiles quantiles(std::vector<double> v) {
  Quantiles q;
  if (v.empty()) return q;
  std::sort(v.begin(), v.end());
  auto rank = [&](double frac) {
    const auto k = static_cast<std::size_t>(std::ceil(frac * static_cast<double>(v.size())));
    return v[std::clamp<std::size_t>(k, 1, v.size()) - 1];
  };
  q.min = v.front();
  q.median = rank(0.5);
  q.p90 = rank(0.9);
  q.max = v.back();
  return q;
}

std::vector<CellSummary> summarize(const std::vector<ReportRow>& rows) {
  struct Acc {
    std::size_t count = 0;
    std::size_t degenerate = 0;
    std::vector<double> upper;
    std::vector<double> prop2;
  };
  std::map<std::pair<double, int>, Acc> cells;
  for (const auto& r : rows) {
    auto& c = cells[{r.p, r.depth}];
    ++c.count;
    c.prop2.push_back(r.prop2_ratio);
    // The norm ratio is undefined when both testing constants vanish.
    if (r.T + r.Tstar > 0.0) {
      c.upper.push_back(r.ratio_upper);
    } else {
      ++c.degenerate;
    }
  }
  std::vector<CellSummary> out;
  for (const auto& [key, acc] : cells) {
    CellSummary s;
    s.p = key.first;
    s.depth = key.second;
    s.count = acc.count;
    s.degenerate = acc.degenerate;
    s.ratio_upper = quantiles(acc.upper);
    s.prop2_ratio = quantiles(acc.prop2);
    out.push_back(s);
  }
  return out;
}

std::string summary_csv(const std::vector<CellSummary>& cells) {
  std::ostringstream out;
  out << "#report-summary v1\n"
      << "p,depth,count,degenerate,ratio_upper_min,ratio_upper_median,ratio_upper_p90,ratio_upper_max,"
         "prop2_ratio_min,prop2_ratio_median,prop2_ratio_p90,prop2_ratio_max\n";
  for (const auto& c : cells) {
    out << fmt(c.p) << ',' << c.depth << ',' << c.count << ',' << c.degenerate;
    for (const auto& q : {c.ratio_upper, c.prop2_ratio}) {
      out << ',' << fmt(q.min) << ',' << fmt(q.median) << ',' << fmt(q.p90) << ',' << fmt(q.max);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace dyadic
