#pragma once
// The property suite behind `verify`, and the sweep/aggregation behind
// `report`.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dyadic/instance_gen.hpp"
#include "dyadic/io.hpp"
#include "dyadic/norm_estimation.hpp"

namespace dyadic {

struct SweepOptions {
  std::uint64_t seed = 1;
  int instances = 20;           // per (p, depth) cell
  std::vector<double> ps{2.0};
  std::vector<int> depths{3};
  int dimension = 1;
  int restarts = 4;
  double tol = 1e-10;
};

// Seed of instance `index` in cell (p_index, depth); independent of the
// order in which cells are visited.
std::uint64_t instance_seed(std::uint64_t base, std::size_t p_index, int depth, int index);

// Random instances of one cell, generated with default ranges and a small
// sparsity so the zero conventions are exercised.
GenSpec sweep_spec(const SweepOptions& options, std::size_t p_index, int depth, int index);

// ---- verify -----------------------------------------------------------------

struct PropertyResult {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;   // detail of the first failing check
  std::string instance_json;   // instance of the first failure, if any
};

struct VerifyReport {
  std::vector<PropertyResult> properties;
  bool passed() const;
  // Deterministic text: one line per property, then the failing instances.
  std::string text(const SweepOptions& options) const;
};

VerifyReport run_verify(const SweepOptions& options);

// ---- report -----------------------------------------------------------------

// Every column of a report row for one instance. `seed` drives the random
// f and g used by the stopping and embedding columns.
ReportRow evaluate_row(const Instance& inst, const std::string& id, std::uint64_t seed, const NormOptions& norm);

// Rows for every cell of the sweep, sorted by instance_id.
std::vector<ReportRow> run_sweep(const SweepOptions& options);

struct Quantiles {
  double min = 0.0;
  double median = 0.0;
  double p90 = 0.0;
  double max = 0.0;
};

struct CellSummary {
  double p = 0.0;
  int depth = 0;
  std::size_t count = 0;
  std::size_t degenerate = 0;  // rows with T + Tstar = 0, left out of ratio_upper
  Quantiles ratio_upper;
  Quantiles prop2_ratio;
};

// Nearest-rank quantiles; empty input gives zeros.
Quantiles quantiles(std::vector<double> values);

// Per-(p, depth) summaries, ordered by p then depth. A pure function of the rows.
std::vector<CellSummary> summarize(const std::vector<ReportRow>& rows);
std::string summary_csv(const std::vector<CellSummary>& cells);

}  // namespace dyadic
