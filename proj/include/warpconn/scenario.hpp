#pragma once

// Scenario manifests and audit reports as JSON. The manifest schema is
// documented in docs/manifest.md.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "warpconn/audit.hpp"
#include "warpconn/error.hpp"
#include "warpconn/expr.hpp"
#include "warpconn/geometry.hpp"
#include "warpconn/tripathi.hpp"
#include "warpconn/warped.hpp"

namespace warpconn {

enum class ConnectionKind { preset, explicit_data, random };

struct Scenario {
  std::string name;
  WarpedProduct wp;
  Box box;  // assembled coordinates
  ConnectionKind kind = ConnectionKind::preset;
  std::optional<PresetId> preset_id;
  TripathiData fixed_data;  // preset or explicit connections
  std::optional<Placement> placement;
  std::vector<std::string> checks;  // empty: the applicable defaults
  std::size_t samples = 100;
  std::uint64_t seed = 42;
  double tolerance = 1e-9;

  /// Connection data; random connections are drawn from `seed`.
  TripathiData data(std::uint64_t seed_value) const {
    if (kind != ConnectionKind::random) return fixed_data;
    Rng rng(seed_value ^ kDataStream);
    return random_connection_data(wp, placement, box, rng);
  }

  std::vector<const CheckSpec*> selected_checks(const std::vector<std::string>& override_checks = {}) const {
    const auto& pats = override_checks.empty() ? checks : override_checks;
    if (pats.empty()) return default_checks(placement, preset_id);
    return select_checks(pats);
  }
};

namespace detail {

using json = nlohmann::json;

inline void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) throw ConfigError("manifest: unknown field '" + where + (where.empty() ? "" : ".") + it.key() + "'");
  }
}

inline const json& require(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key))
    throw ConfigError("manifest: missing field '" + where + (where.empty() ? "" : ".") + key + "'");
  return obj.at(key);
}

inline std::string field_path(const std::string& where, const char* key) {
  return where.empty() ? key : where + "." + key;
}

inline std::string expect_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError("manifest: '" + path + "' must be a string expression");
  return j.get<std::string>();
}

inline ScalarExpr expression(const json& j, const std::string& path, const VarList& vars) {
  const std::string text = j.is_number() ? detail::format_number(j.get<double>()) : expect_string(j, path);
  try {
    return parse(text, vars);
  } catch (const ParseError& e) {
    throw ConfigError("manifest: '" + path + "': " + e.what());
  } catch (const Error& e) {
    throw ConfigError("manifest: '" + path + "': " + e.what());
  }
}

inline std::vector<std::string> names(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError("manifest: '" + path + "' must be a nonempty list of names");
  std::vector<std::string> out;
  for (const auto& n : j) out.push_back(expect_string(n, path));
  return out;
}

inline std::vector<std::vector<ScalarExpr>> matrix(const json& j, const std::string& path, const VarList& vars) {
  const std::size_t n = vars->size();
  if (!j.is_array() || j.size() != n)
    throw ConfigError("manifest: '" + path + "' must have " + std::to_string(n) + " rows");
  std::vector<std::vector<ScalarExpr>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n)
      throw ConfigError("manifest: '" + path + "[" + std::to_string(i) + "]' must have " + std::to_string(n) +
                        " entries");
    std::vector<ScalarExpr> row;
    for (std::size_t k = 0; k < n; ++k)
      row.push_back(expression(j[i][k], path + "[" + std::to_string(i) + "][" + std::to_string(k) + "]", vars));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline VectorField vector_field(const json& j, const std::string& path, const VarList& vars) {
  if (!j.is_array() || j.size() != vars->size())
    throw ConfigError("manifest: '" + path + "' must have " + std::to_string(vars->size()) + " components");
  std::vector<ScalarExpr> c;
  for (std::size_t i = 0; i < j.size(); ++i) c.push_back(expression(j[i], path + "[" + std::to_string(i) + "]", vars));
  return VectorField(vars, std::move(c));
}

inline Tensor11Field tensor_field(const json& j, const std::string& path, const VarList& vars) {
  auto rows = matrix(j, path, vars);
  std::vector<ScalarExpr> e;
  for (auto& r : rows)
    for (auto& x : r) e.push_back(std::move(x));
  return Tensor11Field(vars, std::move(e));
}

inline Box box(const json& j, const std::string& path, std::size_t n) {
  if (!j.is_array() || j.size() != n)
    throw ConfigError("manifest: '" + path + "' must have one [lo, hi] interval per coordinate");
  Box b;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& iv = j[i];
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
      throw ConfigError("manifest: '" + path + "[" + std::to_string(i) + "]' must be [lo, hi]");
    const Interval in{iv[0].get<double>(), iv[1].get<double>()};
    if (!(in.lo < in.hi)) throw ConfigError("manifest: '" + path + "[" + std::to_string(i) + "]' needs lo < hi");
    b.push_back(in);
  }
  return b;
}

struct Factor {
  ChartMetric metric;
  Box box;
};

inline Factor factor(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError("manifest: '" + where + "' must be a table");
  allow_keys(j, where, {"coords", "metric", "box"});
  const auto coord_names = names(require(j, where, "coords"), field_path(where, "coords"));
  VarList vars;
  try {
    vars = make_vars(coord_names);
  } catch (const Error& e) {
    throw ConfigError("manifest: '" + field_path(where, "coords") + "': " + e.what());
  }
  const auto rows = matrix(require(j, where, "metric"), field_path(where, "metric"), vars);
  Factor f;
  try {
    f.metric = ChartMetric(vars, rows);
  } catch (const Error& e) {
    throw ConfigError("manifest: '" + field_path(where, "metric") + "': " + e.what());
  }
  f.box = box(require(j, where, "box"), field_path(where, "box"), vars->size());
  return f;
}

}  // namespace detail

/// Build a scenario from manifest text. `origin` names the source in errors.
inline Scenario parse_manifest(const std::string& text, const std::string& origin = "manifest") {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": JSON syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(origin + ": top level must be a table");
  detail::allow_keys(doc, "",
                     {"name", "base", "fiber", "warping", "connection", "placement", "checks", "samples", "seed",
                      "tolerance"});

  Scenario sc;
  sc.name = doc.contains("name") ? detail::expect_string(doc["name"], "name") : std::string("scenario");
  const auto base = detail::factor(detail::require(doc, "", "base"), "base");
  const auto fiber = detail::factor(detail::require(doc, "", "fiber"), "fiber");
  const ScalarExpr F = detail::expression(detail::require(doc, "", "warping"), "warping", base.metric.vars());
  try {
    sc.wp = build_warped(base.metric, fiber.metric, F, base.box);
  } catch (const Error& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
  sc.box = base.box;
  sc.box.insert(sc.box.end(), fiber.box.begin(), fiber.box.end());

  if (doc.contains("placement")) {
    const auto p = placement_from_string(detail::expect_string(doc["placement"], "placement"));
    if (!p) throw ConfigError("manifest: 'placement' must be \"horizontal\" or \"vertical\"");
    sc.placement = p;
  }
  if (doc.contains("checks")) {
    const auto& c = doc["checks"];
    if (!c.is_array()) throw ConfigError("manifest: 'checks' must be a list of check names");
    for (const auto& x : c) sc.checks.push_back(detail::expect_string(x, "checks"));
    try {
      select_checks(sc.checks);
    } catch (const Error& e) {
      throw ConfigError(std::string("manifest: 'checks': ") + e.what());
    }
  }
  if (doc.contains("samples")) {
    const auto& s = doc["samples"];
    if (!s.is_number_integer() || s.get<long long>() < 1)
      throw ConfigError("manifest: 'samples' must be a positive integer");
    sc.samples = s.get<std::size_t>();
  }
  if (doc.contains("seed")) {
    const auto& s = doc["seed"];
    if (!s.is_number_integer() || s.get<long long>() < 0)
      throw ConfigError("manifest: 'seed' must be a non-negative integer");
    sc.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("tolerance")) {
    const auto& t = doc["tolerance"];
    if (!t.is_number() || !(t.get<double>() > 0.0)) throw ConfigError("manifest: 'tolerance' must be positive");
    sc.tolerance = t.get<double>();
  }

  const ChartMetric& m = sc.wp.assembled();
  const VarList& vars = m.vars();
  const json conn = doc.contains("connection") ? doc["connection"] : json::object({{"preset", "levi_civita"}});
  if (!conn.is_object()) throw ConfigError("manifest: 'connection' must be a table");
  const std::string cw = "connection";

  if (conn.contains("random")) {
    detail::allow_keys(conn, cw, {"random"});
    if (!conn["random"].is_boolean() || !conn["random"].get<bool>())
      throw ConfigError("manifest: 'connection.random' must be true when present");
    sc.kind = ConnectionKind::random;
  } else {
    detail::allow_keys(conn, cw, {"preset", "f1", "f2", "P", "P1", "P2", "phi"});
    PresetParams params;
    if (conn.contains("f1")) params.f1 = detail::expression(conn["f1"], "connection.f1", vars);
    if (conn.contains("f2")) params.f2 = detail::expression(conn["f2"], "connection.f2", vars);
    if (conn.contains("P")) params.P = detail::vector_field(conn["P"], "connection.P", vars);
    if (conn.contains("P1")) params.P1 = detail::vector_field(conn["P1"], "connection.P1", vars);
    if (conn.contains("P2")) params.P2 = detail::vector_field(conn["P2"], "connection.P2", vars);
    if (conn.contains("phi")) params.phi = detail::tensor_field(conn["phi"], "connection.phi", vars);
    if (conn.contains("preset")) {
      const auto id = preset_from_string(detail::expect_string(conn["preset"], "connection.preset"));
      if (!id) throw ConfigError("manifest: 'connection.preset' is not a known preset (see `presets`)");
      sc.kind = ConnectionKind::preset;
      sc.preset_id = id;
      const auto validation = validation_points(sc.box, 16);
      try {
        sc.fixed_data = preset(*id, params, m, validation);
      } catch (const Error& e) {
        throw ConfigError(std::string("manifest: 'connection': ") + e.what());
      }
    } else {
      sc.kind = ConnectionKind::explicit_data;
      TripathiData d = TripathiData::zero(vars);
      if (params.f1) d.f1 = *params.f1;
      if (params.f2) d.f2 = *params.f2;
      if (params.P) d.P = *params.P;
      if (params.P1) d.P1 = *params.P1;
      if (params.P2) d.P2 = *params.P2;
      if (params.phi) d.phi = *params.phi;
      sc.fixed_data = std::move(d);
    }
  }
  return sc;
}

inline Scenario load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open manifest '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path);
}

// ---------------------------------------------------------------------------
// Reports

struct ReportHeader {
  std::string scenario;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double tolerance = 0.0;
};

namespace detail {

// Seventeen significant digits so every double reads back to the same bits.
// JSON has no NaN or infinity: NaN is written as null, infinities as the
// strings "inf" and "-inf".
inline std::string report_number(double x) {
  if (std::isnan(x)) return "null";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  // "-0" would read back as the integer zero and lose its sign.
  if (x == 0.0 && std::signbit(x)) return "-0.0";
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double read_number(const nlohmann::json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ConfigError("report: bad number '" + s + "'");
  }
  return j.get<double>();
}

inline std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace detail

/// Machine-readable report, one record per check variant.
inline std::string report_json(const ReportHeader& h, const AuditReport& r) {
  using detail::quoted;
  using detail::report_number;
  std::string out = "{\n";
  out += "  \"scenario\": " + quoted(h.scenario) + ",\n";
  out += "  \"seed\": " + std::to_string(h.seed) + ",\n";
  out += "  \"samples\": " + std::to_string(h.samples) + ",\n";
  out += "  \"tolerance\": " + report_number(h.tolerance) + ",\n";
  out += std::string("  \"all_pass\": ") + (r.all_pass() ? "true" : "false") + ",\n";
  out += "  \"records\": [";
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const auto& rec = r.records[i];
    out += i == 0 ? "\n" : ",\n";
    out += "    {\n";
    out += "      \"check\": " + quoted(rec.check) + ",\n";
    out += "      \"variant\": " + quoted(std::string(to_string(rec.variant))) + ",\n";
    out += "      \"samples\": " + std::to_string(rec.samples) + ",\n";
    out += "      \"max_residual\": " + report_number(rec.max_residual) + ",\n";
    out += "      \"mean_residual\": " + report_number(rec.mean_residual) + ",\n";
    out += "      \"tolerance\": " + report_number(rec.tolerance) + ",\n";
    out += std::string("      \"pass\": ") + (rec.pass ? "true" : "false") + ",\n";
    out += "      \"argmax_point\": [";
    for (std::size_t k = 0; k < rec.argmax_point.size(); ++k)
      out += (k ? ", " : "") + report_number(rec.argmax_point[k]);
    out += "]\n    }";
  }
  out += r.records.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

inline std::pair<ReportHeader, AuditReport> read_report(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    ReportHeader h{doc.at("scenario").get<std::string>(), doc.at("seed").get<std::uint64_t>(),
                   doc.at("samples").get<std::size_t>(), detail::read_number(doc.at("tolerance"))};
    AuditReport r;
    for (const auto& j : doc.at("records")) {
      CheckRecord rec;
      rec.check = j.at("check").get<std::string>();
      const auto v = variant_from_string(j.at("variant").get<std::string>());
      if (!v) throw ConfigError("report: unknown variant");
      rec.variant = *v;
      rec.samples = j.at("samples").get<std::size_t>();
      rec.max_residual = detail::read_number(j.at("max_residual"));
      rec.mean_residual = detail::read_number(j.at("mean_residual"));
      rec.tolerance = detail::read_number(j.at("tolerance"));
      rec.pass = j.at("pass").get<bool>();
      std::vector<double> c;
      for (const auto& x : j.at("argmax_point")) c.push_back(detail::read_number(x));
      rec.argmax_point = Point(std::move(c));
      r.records.push_back(std::move(rec));
    }
    return {h, r};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
}

/// Aligned table of the same records.
inline std::string report_table(const AuditReport& r) {
  std::size_t w = 5;
  for (const auto& rec : r.records) w = std::max(w, rec.check.size());
  std::string out;
  char line[512];
  std::snprintf(line, sizeof line, "%-*s  %-10s  %7s  %12s  %12s  %9s  %-4s  %s\n", static_cast<int>(w), "check",
                "variant", "samples", "max_resid", "mean_resid", "tol", "pass", "argmax_point");
  out += line;
  for (const auto& rec : r.records) {
    std::snprintf(line, sizeof line, "%-*s  %-10s  %7zu  %12.3e  %12.3e  %9.1e  %-4s  %s\n", static_cast<int>(w),
                  rec.check.c_str(), std::string(to_string(rec.variant)).c_str(), rec.samples, rec.max_residual,
                  rec.mean_residual, rec.tolerance, rec.pass ? "yes" : "NO", format_point(rec.argmax_point).c_str());
    out += line;
  }
  return out;
}

}  // namespace warpconn
