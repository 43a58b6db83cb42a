// Command-line front end: spectra, Morse index, non-local spectrum, identity
// checks and convergence studies on the critical catenoid and the flat disk.
//
// Exit codes: 0 success, 2 invalid configuration, 3 certification failure,
// 1 any other error.

#include <CLI11.hpp>

#include <iostream>

#include "fbms/report.hpp"

namespace {

struct RawOptions {
  std::string surface = "catenoid";
  std::string problem = "robin";
  std::string modes = "0..8";
  std::string grids = "512,1024,2048";
};

void add_common(CLI::App* sub, RawOptions& raw, fbms::RunConfig& config) {
  sub->add_option("--surface", raw.surface, "catenoid | disk")->capture_default_str();
  sub->add_option("--n", raw.grids, "grid sizes, comma separated doublings")
      ->capture_default_str();
  sub->add_option("--guard", config.guard, "guard band around thresholds")->capture_default_str();
  sub->add_option("--format", config.format, "stdout format: text | json | csv")
      ->capture_default_str();
  sub->add_option("--output,-o", config.output,
                  "write JSON (or CSV for .csv paths) to this file");
  sub->add_option("--seed", config.seed, "seed of the random test functions")
      ->capture_default_str();
  sub->add_option("--mmax", config.mmax, "highest Fourier mode for index/nonlocal/verify")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral laboratory for free boundary minimal surfaces in the unit ball"};
  app.require_subcommand(1);

  RawOptions raw;
  fbms::RunConfig config;
  config.threads = fbms::threads_from_env();

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of one problem over a mode range");
  auto* index = app.add_subcommand("index", "certified Morse index (Robin count below threshold)");
  auto* nonlocal = app.add_subcommand("nonlocal", "spectrum of Q restricted to J-harmonic functions");
  auto* verify = app.add_subcommand("verify", "quadrature and finite-difference identity checks");
  auto* convergence = app.add_subcommand("convergence", "observed order of the lowest eigenvalues");

  for (auto* sub : {spectrum, index, nonlocal, verify, convergence}) add_common(sub, raw, config);
  for (auto* sub : {spectrum, convergence}) {
    sub->add_option("--problem", raw.problem,
                    "robin | dirichlet | steklov-laplacian | steklov-jacobi | radial-l0 | radial-l1")
        ->capture_default_str();
    sub->add_option("--modes", raw.modes, "Fourier modes, e.g. 0..8")->capture_default_str();
  }
  for (auto* sub : {spectrum, index}) {
    sub->add_option("--threshold", config.threshold, "count eigenvalues below this value")
        ->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  fbms::RunReport report;
  try {
    config.surface = fbms::parse_surface(raw.surface);
    config.problem = raw.problem;
    std::tie(config.mode_lo, config.mode_hi) = fbms::parse_modes(raw.modes);
    config.grids = fbms::parse_grids(raw.grids);
    report = fbms::run_command(command, config);
  } catch (const fbms::ConfigError& e) {
    std::cerr << "fbms: invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "fbms: invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fbms: error: " << e.what() << '\n';
    return 1;
  }

  if (config.format == "json") {
    std::cout << fbms::to_json(report);
  } else if (config.format == "csv") {
    std::cout << fbms::to_csv(report);
  } else {
    std::cout << report.summary;
  }

  if (!config.output.empty()) {
    const bool csv = config.output.size() > 4 &&
                     config.output.compare(config.output.size() - 4, 4, ".csv") == 0;
    try {
      fbms::write_atomic(config.output, csv ? fbms::to_csv(report) : fbms::to_json(report));
    } catch (const std::exception& e) {
      std::cerr << "fbms: " << e.what() << '\n';
      return 1;
    }
  }
  return report.exit_code;
}
