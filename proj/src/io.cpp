#include "dyadic/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dyadic/errors.hpp"

namespace dyadic {

using nlohmann::json;

std::string format_hex(double x) {
  if (!std::isfinite(x)) throw DomainError("cannot serialise a non-finite value");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, std::fabs(x), std::chars_format::hex);
  std::string out = std::signbit(x) ? "-0x" : "0x";
  out.append(buf, res.ptr);
  return out;
}

double parse_real(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  double value = 0.0;
  std::from_chars_result res{};
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    s.remove_prefix(2);
    res = std::from_chars(s.data(), s.data() + s.size(), value, std::chars_format::hex);
  } else {
    res = std::from_chars(s.data(), s.data() + s.size(), value, std::chars_format::general);
  }
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError("not a real number: '" + std::string(text) + "'");
  }
  return negative ? -value : value;
}

std::string instance_to_json(const Instance& inst) {
  const auto& sys = inst.sys;
  json j = json::object();
  j["version"] = kInstanceSchema;
  j["p"] = format_hex(inst.p.p());
  j["dimension"] = sys.dimension();
  j["depth"] = sys.depth();
  auto reals = [](std::span<const double> v) {
    json a = json::array();
    for (const double x : v) a.push_back(format_hex(x));
    return a;
  };
  j["sigma"] = reals(inst.sigma.values());
  j["omega"] = reals(inst.omega.values());
  json mu = json::array();
  for (int level = 0; level <= sys.depth(); ++level) mu.push_back(reals(inst.mu.level(level)));
  j["mu"] = std::move(mu);
  json lambda = json::object();
  for (std::size_t o = 0; o < sys.num_cubes(); ++o) {
    if (inst.lambda[o] != 0.0) lambda[sys.path(sys.cube(o))] = format_hex(inst.lambda[o]);
  }
  j["lambda"] = std::move(lambda);
  return j.dump(1) + "\n";
}

namespace {

std::string escape_key(const std::string& key) {
  std::string out;
  for (const char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

double real_at(const json& v, const std::string& where) {
  double x = 0.0;
  if (v.is_string()) {
    try {
      x = parse_real(v.get<std::string>());
    } catch (const ParseError& e) {
      throw SchemaError(where, e.what());
    }
  } else if (v.is_number()) {
    x = v.get<double>();
  } else {
    throw SchemaError(where, "expected a real number");
  }
  if (!std::isfinite(x) || x < 0.0) throw SchemaError(where, "expected a finite nonnegative value");
  return x;
}

int int_at(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw SchemaError(where, "expected an integer");
  return v.get<int>();
}

std::vector<double> reals_at(const json& v, std::size_t size, const std::string& where) {
  if (!v.is_array()) throw SchemaError(where, "expected an array");
  if (v.size() != size) {
    throw SchemaError(where, "expected " + std::to_string(size) + " entries, got " + std::to_string(v.size()));
  }
  std::vector<double> out(size);
  for (std::size_t i = 0; i < size; ++i) out[i] = real_at(v[i], where + "/" + std::to_string(i));
  return out;
}

}  // namespace

Instance instance_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("", "expected an object");
  static const std::set<std::string> known = {"version", "p", "dimension", "depth", "sigma", "omega", "mu", "lambda"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) throw SchemaError("/" + escape_key(item.key()), "unknown field");
  }
  for (const auto& key : known) {
    if (!j.contains(key)) throw SchemaError("/" + key, "missing field");
  }
  if (!j["version"].is_string() || j["version"].get<std::string>() != kInstanceSchema) {
    throw SchemaError("/version", std::string("expected \"") + kInstanceSchema + "\"");
  }
  const double p = real_at(j["p"], "/p");
  if (!(p > 1.0)) throw SchemaError("/p", "exponent must be > 1");
  const int dimension = int_at(j["dimension"], "/dimension");
  const int depth = int_at(j["depth"], "/depth");
  if (dimension < 1 || dimension > DyadicSystem::kMaxDimension) throw SchemaError("/dimension", "must be 1, 2 or 3");
  if (depth < 0) throw SchemaError("/depth", "must be >= 0");
  DyadicSystem sys(dimension, depth);

  Weights sigma(reals_at(j["sigma"], sys.num_atoms(), "/sigma"));
  Weights omega(reals_at(j["omega"], sys.num_atoms(), "/omega"));

  const json& jm = j["mu"];
  if (!jm.is_array() || jm.size() != static_cast<std::size_t>(sys.num_levels())) {
    throw SchemaError("/mu", "expected " + std::to_string(sys.num_levels()) + " levels");
  }
  ScaleFunction mu = ScaleFunction::zeros(sys);
  for (int level = 0; level <= depth; ++level) {
    const auto row = reals_at(jm[static_cast<std::size_t>(level)], sys.num_atoms(), "/mu/" + std::to_string(level));
    std::copy(row.begin(), row.end(), mu.level(level).begin());
  }

  const json& jl = j["lambda"];
  if (!jl.is_object()) throw SchemaError("/lambda", "expected an object keyed by cube path");
  std::vector<double> lambda(sys.num_cubes(), 0.0);
  for (const auto& item : jl.items()) {
    const std::string where = "/lambda/" + escape_key(item.key());
    CubeId q;
    try {
      q = sys.cube_from_path(item.key());
    } catch (const ParseError& e) {
      throw SchemaError(where, e.what());
    }
    lambda[sys.ordinal(q)] = real_at(item.value(), where);
  }
  return make_instance(std::move(sys), p, std::move(sigma), std::move(omega), std::move(mu), std::move(lambda));
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return instance_from_json(ss.str());
}

void write_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << instance_to_json(inst);
}

std::uint64_t instance_digest(const Instance& inst) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : instance_to_json(inst)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// ---- CSV -------------------------------------------------------------------

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols = {
      "instance_id", "seed", "p", "dimension", "depth", "T", "Tstar", "lambda_norm_lb", "oracle_value",
      "oracle_kind", "ratio_upper", "ratio_lower", "prop2_ratio", "carleson_Cemp_over_Cprime",
      "g_family_carleson", "f_family_sparse_max", "iterations", "restarts", "wall_time_ms"};
  return cols;
}

std::string csv_header() {
  std::string out;
  for (const auto& c : report_columns()) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string to_csv(const ReportRow& r) {
  if (r.instance_id.find(',') != std::string::npos || r.oracle_kind.find(',') != std::string::npos) {
    throw PreconditionError("report fields may not contain commas");
  }
  std::string s = r.instance_id;
  s += ',' + std::to_string(r.seed);
  s += ',' + num(r.p);
  s += ',' + std::to_string(r.dimension);
  s += ',' + std::to_string(r.depth);
  s += ',' + num(r.T);
  s += ',' + num(r.Tstar);
  s += ',' + num(r.lambda_norm_lb);
  s += ',' + (r.oracle_value ? num(*r.oracle_value) : std::string());
  s += ',' + r.oracle_kind;
  s += ',' + num(r.ratio_upper);
  s += ',' + num(r.ratio_lower);
  s += ',' + num(r.prop2_ratio);
  s += ',' + num(r.carleson_Cemp_over_Cprime);
  s += ',' + num(r.g_family_carleson);
  s += ',' + num(r.f_family_sparse_max);
  s += ',' + std::to_string(r.iterations);
  s += ',' + std::to_string(r.restarts);
  s += ',' + num(r.wall_time_ms);
  return s;
}

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << kReportCsvVersion << '\n' << csv_header() << '\n';
  for (const auto& r : rows) out << to_csv(r) << '\n';
}

std::vector<ReportRow> read_report_csv(std::istream& in) {
  std::vector<ReportRow> rows;
  std::string line;
  bool header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // Rows end at another section marker, such as an appended summary.
    if (header && line.rfind("#report-", 0) == 0) break;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != csv_header()) throw ParseError("unexpected CSV header");
      header = true;
      continue;
    }
    const auto f = split(line);
    if (f.size() != report_columns().size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(report_columns().size()) + " fields");
    }
    try {
      ReportRow r;
      r.instance_id = f[0];
      r.seed = std::stoull(f[1]);
      r.p = parse_real(f[2]);
      r.dimension = std::stoi(f[3]);
      r.depth = std::stoi(f[4]);
      r.T = parse_real(f[5]);
      r.Tstar = parse_real(f[6]);
      r.lambda_norm_lb = parse_real(f[7]);
      if (!f[8].empty()) r.oracle_value = parse_real(f[8]);
      r.oracle_kind = f[9];
      r.ratio_upper = parse_real(f[10]);
      r.ratio_lower = parse_real(f[11]);
      r.prop2_ratio = parse_real(f[12]);
      r.carleson_Cemp_over_Cprime = parse_real(f[13]);
      r.g_family_carleson = parse_real(f[14]);
      r.f_family_sparse_max = parse_real(f[15]);
      r.iterations = std::stoi(f[16]);
      r.restarts = std::stoi(f[17]);
      r.wall_time_ms = parse_real(f[18]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ParseError("line " + std::to_string(line_no) + ": malformed field");
    }
  }
  if (!header) throw ParseError("missing CSV header");
  return rows;
}

}  // namespace dyadic
