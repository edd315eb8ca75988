#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "warpconn/cli.hpp"
#include "warpconn/error.hpp"
#include "warpconn/scenario.hpp"

int main(int argc, char** argv) {
  namespace cli = warpconn::cli;
  CLI::App app{"Audit connections on warped product manifolds"};
  app.require_subcommand(1);

  std::string manifest, point;
  auto* eval = app.add_subcommand("eval", "Print metric, coefficients, torsion and non-metricity at a point");
  eval->add_option("--manifest", manifest, "Scenario manifest (JSON)")->required();
  eval->add_option("--point", point, "Comma-separated coordinates, base first")->required();

  std::vector<std::string> checks;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<double> tol;
  std::optional<std::string> json_out;
  auto* audit = app.add_subcommand("audit", "Evaluate identity residuals at sampled points");
  audit->add_option("--manifest", manifest, "Scenario manifest (JSON)")->required();
  audit->add_option("--checks", checks, "Check names or patterns, comma-separated")->delimiter(',');
  audit->add_option("--seed", seed, "Seed for points, fields and random data");
  audit->add_option("--samples", samples, "Number of sample points");
  audit->add_option("--tol", tol, "Pass tolerance on the max residual");
  audit->add_option("--json", json_out, "Write the machine-readable report here");

  auto* presets = app.add_subcommand("presets", "List the named special connections");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kConfigError;
  }

  try {
    if (presets->parsed()) return cli::run_presets(std::cout);
    const auto sc = warpconn::load_manifest(manifest);
    if (eval->parsed()) return cli::run_eval(sc, cli::parse_point(point, sc.wp.dim()), std::cout);
    cli::AuditOptions opt{checks, seed, samples, tol, json_out};
    return cli::run_audit_command(sc, opt, std::cout);
  } catch (const warpconn::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kConfigError;
  } catch (const warpconn::Error& e) {
    // Parse, domain and geometry failures all come from the scenario's inputs.
    std::cerr << "error: " << e.what() << "\n";
    return cli::kConfigError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kConfigError;
  }
}
