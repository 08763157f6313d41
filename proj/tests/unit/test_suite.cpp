#include <doctest.h>

#include <set>
#include <sstream>

#include "dyadic/suite.hpp"

using namespace dyadic;

TEST_CASE("a small verification run passes and is reproducible") {
  SweepOptions opt;
  opt.instances = 6;
  opt.ps = {2.0, 3.0};
  opt.depths = {2};
  opt.restarts = 2;
  const VerifyReport a = run_verify(opt);
  for (const PropertyResult& r : a.properties) {
    INFO(r.name << ": " << r.first_failure);
    CHECK(r.failures == 0);
    CHECK(r.checks > 0);
  }
  CHECK(a.passed());
  CHECK(a.text(opt) == run_verify(opt).text(opt));
}

TEST_CASE("instance seeds are distinct across the sweep") {
  std::set<std::uint64_t> seen;
  for (std::size_t pi = 0; pi < 3; ++pi)
    for (int d = 0; d < 5; ++d)
      for (int i = 0; i < 50; ++i) seen.insert(instance_seed(1, pi, d, i));
  CHECK(seen.size() == 3 * 5 * 50);
}

TEST_CASE("nearest-rank quantiles") {
  const Quantiles q = quantiles({5.0, 1.0, 4.0, 2.0, 3.0, 6.0, 7.0, 8.0, 9.0, 10.0});
  CHECK(q.min == 1.0);
  CHECK(q.median == 5.0);
  CHECK(q.p90 == 9.0);
  CHECK(q.max == 10.0);
  const Quantiles one = quantiles({2.0});
  CHECK(one.min == 2.0);
  CHECK(one.p90 == 2.0);
  const Quantiles none = quantiles({});
  CHECK(none.max == 0.0);
}

TEST_CASE("summaries group by exponent and depth") {
  std::vector<ReportRow> rows(4);
  rows[0].p = 2.0; rows[0].depth = 1; rows[0].ratio_upper = 0.4; rows[0].T = 1.0;
  rows[1].p = 2.0; rows[1].depth = 1; rows[1].ratio_upper = 0.6; rows[1].T = 1.0;
  rows[2].p = 2.0; rows[2].depth = 1; rows[2].ratio_upper = 0.0;
  rows[3].p = 3.0; rows[3].depth = 2; rows[3].ratio_upper = 0.5; rows[3].Tstar = 1.0;
  const auto cells = summarize(rows);
  REQUIRE(cells.size() == 2);
  CHECK(cells[0].p == 2.0);
  CHECK(cells[0].count == 3);
  CHECK(cells[0].degenerate == 1);
  CHECK(cells[0].ratio_upper.min == 0.4);
  CHECK(cells[0].ratio_upper.max == 0.6);
  CHECK(cells[1].depth == 2);
  const std::string csv = summary_csv(cells);
  CHECK(csv.rfind("#report-summary v1\n", 0) == 0);
}

TEST_CASE("sweep rows are sorted and evaluated") {
  SweepOptions opt;
  opt.instances = 3;
  opt.ps = {2.0, 4.0};
  opt.depths = {1, 2};
  opt.restarts = 2;
  const auto rows = run_sweep(opt);
  REQUIRE(rows.size() == 12);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].instance_id < rows[i].instance_id);
  for (const ReportRow& r : rows) {
    CHECK(r.lambda_norm_lb >= std::max(r.T, r.Tstar) * (1 - 1e-12));
    if (r.p == 2.0) CHECK(r.oracle_kind == "spectral");
  }
}
