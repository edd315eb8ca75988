#pragma once

// Command implementations behind the warpconn executable. Argument parsing
// lives in the tool; everything here writes to caller-supplied streams.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "warpconn/audit.hpp"
#include "warpconn/error.hpp"
#include "warpconn/geometry.hpp"
#include "warpconn/scenario.hpp"
#include "warpconn/tripathi.hpp"

namespace warpconn::cli {

enum ExitCode : int { kAllPass = 0, kSomeFail = 1, kConfigError = 2 };

/// "2, 1.5" -> Point(2, 1.5)
inline Point parse_point(const std::string& text, std::size_t dim) {
  std::vector<double> c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("--point: '" + item + "' is not a number");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size() || !std::isfinite(v)) throw ConfigError("--point: '" + item + "' is not a number");
    c.push_back(v);
  }
  if (c.size() != dim)
    throw ConfigError("--point has " + std::to_string(c.size()) + " coordinates, the chart has " +
                      std::to_string(dim));
  return Point(std::move(c));
}

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "% .10g", v);
  return buf;
}

inline void print_matrix(std::ostream& out, const char* title, const Matrix<double>& m) {
  out << title << "\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << "  [";
    for (std::size_t j = 0; j < m.size(); ++j) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%16.10g", m(i, j));
      out << buf;
    }
    out << " ]\n";
  }
}

// Entries below this are printed as zero in the coefficient table.
constexpr double kShowThreshold = 1e-14;

}  // namespace detail

/// Metric, Christoffel symbols, connection coefficients, torsion and
/// non-metricity of the scenario's connection at one point.
inline int run_eval(const Scenario& sc, const Point& p, std::ostream& out) {
  const ChartMetric& m = sc.wp.assembled();
  const auto& names = m.names();
  const std::size_t n = m.dim();
  const TripathiData d = sc.data(sc.seed);
  const auto s = sample_metric<double>(m, p);
  const auto lc = christoffel(s);
  const auto gamma = tripathi_coefficients(s, sample_data<double>(d, p));

  out << "scenario " << sc.name << " at " << format_point(p) << "\n";
  out << "warping F = " << sc.wp.warping().str() << " = " << detail::num(sc.wp.warping_lifted().evaluate(p))
      << "\n\n";
  detail::print_matrix(out, "metric g_ij", s.g);
  detail::print_matrix(out, "inverse metric g^ij", s.ginv);

  out << "\ncoefficients (nonzero entries; k upper, i direction, j argument)\n";
  char line[256];
  std::snprintf(line, sizeof line, "  %-24s %18s %18s\n", "k; i j", "levi-civita", "connection");
  out << line;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(lc(k, i, j)) < detail::kShowThreshold && std::abs(gamma(k, i, j)) < detail::kShowThreshold)
          continue;
        const std::string idx = names[k] + "; " + names[i] + " " + names[j];
        std::snprintf(line, sizeof line, "  %-24s %18.10g %18.10g\n", idx.c_str(), lc(k, i, j), gamma(k, i, j));
        out << line;
      }

  out << "\ntorsion T(d_i, d_j)^k (nonzero entries)\n";
  bool any = false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double t = gamma(k, i, j) - gamma(k, j, i);
        if (std::abs(t) < detail::kShowThreshold) continue;
        const std::string idx = "T(" + names[i] + ", " + names[j] + ")^" + names[k];
        std::snprintf(line, sizeof line, "  %-24s %18.10g\n", idx.c_str(), t);
        out << line;
        any = true;
      }
  if (!any) out << "  (none)\n";

  out << "\nnon-metricity (nabla_k g)_ij (nonzero entries)\n";
  any = false;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        double q = s.dg[k](i, j);
        for (std::size_t l = 0; l < n; ++l) q -= gamma(l, k, i) * s.g(l, j) + gamma(l, k, j) * s.g(i, l);
        if (std::abs(q) < detail::kShowThreshold) continue;
        const std::string idx = "Q_" + names[k] + "(" + names[i] + ", " + names[j] + ")";
        std::snprintf(line, sizeof line, "  %-24s %18.10g\n", idx.c_str(), q);
        out << line;
        any = true;
      }
  if (!any) out << "  (none)\n";
  return kAllPass;
}

struct AuditOptions {
  std::vector<std::string> checks;  // overrides the manifest when nonempty
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<double> tolerance;
  std::optional<std::string> json_path;
};

struct AuditOutcome {
  ReportHeader header;
  AuditReport report;
};

inline AuditOutcome audit_scenario(const Scenario& sc, const AuditOptions& opt) {
  AuditConfig cfg;
  cfg.box = sc.box;
  cfg.seed = opt.seed.value_or(sc.seed);
  cfg.samples = opt.samples.value_or(sc.samples);
  cfg.tolerance = opt.tolerance.value_or(sc.tolerance);
  if (cfg.samples == 0) throw ConfigError("--samples must be positive");
  if (!(cfg.tolerance > 0.0)) throw ConfigError("--tol must be positive");
  const auto checks = sc.selected_checks(opt.checks);
  const TripathiData d = sc.data(cfg.seed);
  return {ReportHeader{sc.name, cfg.seed, cfg.samples, cfg.tolerance}, run_audit(sc.wp, d, sc.placement, checks, cfg)};
}

/// Runs the audit, prints the table, writes the JSON report if asked.
inline int run_audit_command(const Scenario& sc, const AuditOptions& opt, std::ostream& out) {
  const auto outcome = audit_scenario(sc, opt);
  out << report_table(outcome.report);
  std::size_t failed = 0;
  for (const auto& r : outcome.report.records) failed += r.pass ? 0 : 1;
  out << outcome.report.records.size() - failed << " passed, " << failed << " failed\n";
  if (opt.json_path) {
    std::ofstream f(*opt.json_path, std::ios::binary);
    if (!f) throw ConfigError("cannot write report to '" + *opt.json_path + "'");
    f << report_json(outcome.header, outcome.report);
    if (!f) throw ConfigError("failed writing report to '" + *opt.json_path + "'");
  }
  return outcome.report.all_pass() ? kAllPass : kSomeFail;
}

inline int run_presets(std::ostream& out) {
  for (const auto& info : preset_catalog()) {
    out << info.name << "\n";
    out << "  fixed:         " << info.fixed << "\n";
    out << "  required:      " << info.required << "\n";
    out << "  torsion:       T(X,Y) = " << info.torsion << "\n";
    out << "  non-metricity: (nabla_X g)(Y,Z) = " << info.nonmetricity << "\n";
  }
  return kAllPass;
}

}  // namespace warpconn::cli
