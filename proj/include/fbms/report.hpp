#pragma once

// Run configuration, subcommand drivers and JSON / CSV serialization for the
// command-line front end.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbms/geometry.hpp"
#include "fbms/verify.hpp"

namespace fbms {

/// Invalid command-line configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  SurfaceKind surface = SurfaceKind::catenoid;
  std::string problem = "robin";
  int mode_lo = 0;
  int mode_hi = 8;
  std::vector<int> grids{512, 1024, 2048};
  double guard = 1e-6;
  double threshold = 0.0;
  std::string format = "text";  // text | json | csv
  std::string output;           // empty: nothing written to disk
  std::uint64_t seed = 20240607;
  int mmax = 16;
  int threads = 1;
};

/// "0..8" or "3".
std::pair<int, int> parse_modes(const std::string& text);
/// "512,1024,2048".
std::vector<int> parse_grids(const std::string& text);
SurfaceKind parse_surface(const std::string& text);
/// Checks ranges, problem names and the grid sequence; throws ConfigError.
void validate(const RunConfig& config, const std::string& command);
/// FBMS_THREADS if set to a positive integer, else 1.
int threads_from_env();

struct ResultRow {
  std::string problem;
  int mode = 0;
  std::vector<double> eigenvalues;   // finest grid
  std::vector<int> multiplicity;
  std::vector<double> extrapolated;
  std::vector<double> order;
  bool certified = true;
};

struct RunReport {
  std::string command;
  RunConfig config;
  std::vector<ResultRow> results;
  std::vector<IdentityReport> identities;
  std::string timestamp;
  std::string summary;  // human-readable text
  int exit_code = 0;
};

RunReport run_command(const std::string& command, const RunConfig& config);

std::string to_json(const RunReport& report);
std::string to_csv(const RunReport& report);
/// Writes to `path` through a temporary file in the same directory and a
/// rename; throws std::runtime_error on failure.
void write_atomic(const std::string& path, const std::string& content);
std::string iso8601_now();

}  // namespace fbms
