// Command-line runner for the verification suites.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "loopgerbe/centext.hpp"
#include "loopgerbe/runner.hpp"

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kIo = 3, kConvention = 4 };

}  // namespace

int main(int argc, char** argv) {
  using loopgerbe::RunConfig;

  CLI::App app{"Loop-group gerbe and caloron verification runner"};
  app.set_version_flag("--version", loopgerbe::kReportVersion);

  std::string config_path;
  RunConfig flags;
  std::optional<double> tol;
  bool no_timing = false;
  bool list = false;

  app.add_option("--config", config_path, "JSON config file (flags take precedence)");
  auto* o_scenario = app.add_option("--scenario", flags.scenario, "Suite to run")
                         ->check(CLI::IsMember(loopgerbe::scenario_names()));
  auto* o_group = app.add_option("--group", flags.group, "Structure group")->check(CLI::IsMember({"su2", "su3"}));
  auto* o_ntheta = app.add_option("--ntheta", flags.ntheta, "Loop grid size (even, >= 16)");
  auto* o_npath = app.add_option("--npath", flags.npath, "Path grid size");
  auto* o_fd = app.add_option("--fd-step", flags.fd_step, "Finite-difference step in (0, 1e-2]");
  auto* o_tol = app.add_option("--tol", tol, "Override every check tolerance");
  auto* o_seed = app.add_option("--seed", flags.seed, "Random seed");
  auto* o_report = app.add_option("--report", flags.report, "Report format")->check(CLI::IsMember({"json", "csv"}));
  auto* o_out = app.add_option("--out", flags.out, "Report path (default stdout)");
  auto* o_grids = app.add_option("--grids", flags.grids, "Convergence grids, e.g. --grids 64 128 256");
  auto* o_fixtures = app.add_option("--fixtures", flags.fixtures, "Directory for sampled fixture loops");
  app.add_flag("--no-timing", no_timing, "Write zero wall times for reproducible reports");
  app.add_flag("--list", list, "List checks and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  if (list) {
    for (const auto& c : loopgerbe::list_checks())
      std::cout << c.name << '\t' << c.suite << '\t' << c.tag << '\t' << c.tol << '\n';
    return kPass;
  }

  RunConfig config;
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) {
        std::cerr << "error: cannot read config '" << config_path << "'\n";
        return kIo;
      }
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(f);
      } catch (const nlohmann::json::exception& e) {
        throw loopgerbe::UsageError(std::string("config: ") + e.what());
      }
      loopgerbe::apply_json(config, j);
    }
    loopgerbe::apply_environment(config, [](const char* k) { return std::getenv(k); });
    if (o_scenario->count()) config.scenario = flags.scenario;
    if (o_group->count()) config.group = flags.group;
    if (o_ntheta->count()) config.ntheta = flags.ntheta;
    if (o_npath->count()) config.npath = flags.npath;
    if (o_fd->count()) config.fd_step = flags.fd_step;
    if (o_tol->count()) config.tol = tol;
    if (o_seed->count()) config.seed = flags.seed;
    if (o_report->count()) config.report = flags.report;
    if (o_out->count()) config.out = flags.out;
    if (o_grids->count()) config.grids = flags.grids;
    if (o_fixtures->count()) config.fixtures = flags.fixtures;
    if (no_timing) config.timing = false;
    config.validate();
  } catch (const loopgerbe::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    const loopgerbe::Report report = loopgerbe::run(config);
    loopgerbe::write_report(report);
    for (const auto& row : report.checks)
      if (!row.pass) std::cerr << "FAIL " << row.name << ": residual " << row.residual << " > " << row.tol << '\n';
    return report.all_pass() ? kPass : kFail;
  } catch (const loopgerbe::ConventionError& e) {
    std::cerr << "convention error: " << e.what() << '\n';
    return kConvention;
  } catch (const loopgerbe::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  }
}
