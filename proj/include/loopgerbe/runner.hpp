#pragma once

// Verification suites, residual reports and convergence tables.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "loopgerbe/liegroup.hpp"

namespace loopgerbe {

inline constexpr const char* kReportVersion = "1.0.0";

/// Invalid run configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string scenario = "all";
  std::string group = "su2";
  int ntheta = 64;
  int npath = 256;
  double fd_step = 1e-4;
  /// Replaces every check's own tolerance when set.
  std::optional<double> tol;
  std::uint64_t seed = 1;
  std::string report = "json";
  /// Report destination; empty means standard output.
  std::string out;
  /// Grid sizes for the convergence study; empty skips it.
  std::vector<int> grids;
  /// Wall-clock seconds per check; off gives bit-reproducible reports.
  bool timing = true;
  /// Directory for the sampled fixtures; empty skips the dump.
  std::string fixtures;

  /// Throws UsageError.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& config);
/// Overlays the keys present in j onto config. Throws UsageError on unknown
/// keys or wrong types.
void apply_json(RunConfig& config, const nlohmann::json& j);
/// Overlays LOOPGERBE_<KEY> environment variables (SCENARIO, GROUP, NTHETA,
/// NPATH, FD_STEP, TOL, SEED, REPORT, OUT, GRIDS, TIMING, FIXTURES).
void apply_environment(RunConfig& config, const std::function<const char*(const char*)>& getenv_fn);

struct CheckRow {
  std::string name;
  std::string paper_ref;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  double seconds = 0.0;
};

struct ConvergenceRow {
  std::string name;
  int grid = 0;
  double residual = 0.0;
};

struct Report {
  std::string version = kReportVersion;
  RunConfig config;
  std::vector<CheckRow> checks;
  std::vector<ConvergenceRow> convergence;
  bool all_pass() const;
};

nlohmann::json to_json(const Report& report);
std::string to_csv(const Report& report);
/// Serialises in the configured format and writes to config.out (or stdout).
/// Throws std::ios_base::failure on I/O errors.
void write_report(const Report& report);

/// Identity registry: tag -> formula the check exercises.
const std::map<std::string, std::string>& equation_registry();

enum class CheckKind { exact, spectral, finite_difference, quadrature };

struct CheckInfo {
  std::string name;
  std::string tag;
  std::string suite;
  double tol;
  CheckKind kind;
  bool convergence;
};

/// All registered checks, sorted by name.
std::vector<CheckInfo> list_checks();
std::vector<std::string> scenario_names();

/// Residual of one check under a configuration.
double run_check(const std::string& name, const RunConfig& config);
/// Runs the selected suite. Throws ConventionError when the alpha sign
/// self-test fails.
Report run(const RunConfig& config);

/// Residual per grid. Finite-difference checks map grid g to the step
/// kConvergenceStep * 64 / g without extrapolation; the others use g as the
/// theta-grid size.
std::vector<ConvergenceRow> convergence_table(const std::string& name, const std::vector<int>& grids,
                                              const RunConfig& config);
inline constexpr double kConvergenceStep = 1e-2;
/// Least-squares slope of -log(residual) against log(grid).
double observed_order(const std::vector<ConvergenceRow>& rows);

/// Writes the first sampled loops of the central-extension and
/// path-fibration checks to config.fixtures.
void dump_fixtures(const RunConfig& config);

}  // namespace loopgerbe
