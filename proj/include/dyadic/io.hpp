#pragma once
// Instance files (JSON, every real as a hex-float string so round trips are
// bit-exact) and experiment report rows (CSV).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dyadic/forms.hpp"

namespace dyadic {

inline constexpr const char* kInstanceSchema = "dyadic-instance/1";
inline constexpr const char* kReportCsvVersion = "#report-csv v1";

// "0x1.8p+1" style; exact for every finite double.
std::string format_hex(double x);
// Accepts the output of format_hex and plain decimal numbers. Throws ParseError.
double parse_real(std::string_view text);

// Schema:
//   {"version": "dyadic-instance/1", "p": r, "dimension": n, "depth": D,
//    "sigma": [r...], "omega": [r...], "mu": [[r...] per level],
//    "lambda": {"<path>": r, ...}}
// where r is a hex-float string or a JSON number, atoms are listed in
// Z-order, and lambda paths not present are 0.
std::string instance_to_json(const Instance& inst);
// Throws SchemaError with the path of the offending field, SizeLimitError
// for dimension/depth outside the memory guard.
Instance instance_from_json(std::string_view text);

Instance read_instance_file(const std::string& path);
void write_instance_file(const Instance& inst, const std::string& path);

// FNV-1a 64 of instance_to_json.
std::uint64_t instance_digest(const Instance& inst);

struct ReportRow {
  std::string instance_id;
  std::uint64_t seed = 0;
  double p = 2.0;
  int dimension = 1;
  int depth = 0;
  double T = 0.0;
  double Tstar = 0.0;
  double lambda_norm_lb = 0.0;
  std::optional<double> oracle_value;
  std::string oracle_kind;
  double ratio_upper = 0.0;
  double ratio_lower = 0.0;
  double prop2_ratio = 0.0;
  double carleson_Cemp_over_Cprime = 0.0;
  double g_family_carleson = 0.0;
  double f_family_sparse_max = 0.0;
  int iterations = 0;
  int restarts = 0;
  double wall_time_ms = 0.0;
};

const std::vector<std::string>& report_columns();
std::string csv_header();
std::string to_csv(const ReportRow& row);
// Reads rows written by write_report_csv. Throws ParseError.
std::vector<ReportRow> read_report_csv(std::istream& in);
void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows);

}  // namespace dyadic
