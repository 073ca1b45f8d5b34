#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "loopgerbe/runner.hpp"

using namespace loopgerbe;

TEST_CASE("config validation") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.ntheta = 15;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = RunConfig{};
  c.fd_step = 0.02;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = RunConfig{};
  c.tol = 0.0;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = RunConfig{};
  c.scenario = "nope";
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = RunConfig{};
  c.group = "su4";
  CHECK_THROWS_AS(c.validate(), UsageError);
  CHECK_THROWS_AS(run_check("no.such.check", RunConfig{}), UsageError);
}

TEST_CASE("json and environment overlays") {
  RunConfig c;
  apply_json(c, nlohmann::json{{"ntheta", 128}, {"group", "su3"}, {"tol", 1e-3}});
  CHECK(c.ntheta == 128);
  CHECK(c.group == "su3");
  CHECK(*c.tol == 1e-3);
  CHECK_THROWS_AS(apply_json(c, nlohmann::json{{"bogus", 1}}), UsageError);
  CHECK_THROWS_AS(apply_json(c, nlohmann::json{{"ntheta", "many"}}), UsageError);

  const std::map<std::string, std::string> env = {
      {"LOOPGERBE_NTHETA", "96"}, {"LOOPGERBE_SEED", "9"}, {"LOOPGERBE_GRIDS", "64,128"}, {"LOOPGERBE_TIMING", "0"}};
  apply_environment(c, [&](const char* k) -> const char* {
    auto it = env.find(k);
    return it == env.end() ? nullptr : it->second.c_str();
  });
  CHECK(c.ntheta == 96);
  CHECK(c.seed == 9);
  CHECK(c.grids == std::vector<int>{64, 128});
  CHECK_FALSE(c.timing);
  CHECK(c.group == "su3");

  CHECK_THROWS_AS(apply_environment(c, [](const char* k) -> const char* {
                    return std::string(k) == "LOOPGERBE_NTHETA" ? "x" : nullptr;
                  }),
                  UsageError);

  RunConfig back;
  apply_json(back, to_json(c));
  CHECK(to_json(back) == to_json(c));
}

TEST_CASE("registry covers every check") {
  const auto& reg = equation_registry();
  const auto checks = list_checks();
  CHECK(checks.size() >= 30);
  for (std::size_t i = 0; i < checks.size(); ++i) {
    CHECK(reg.count(checks[i].tag) == 1);
    if (i > 0) CHECK(checks[i - 1].name < checks[i].name);
  }
}

TEST_CASE("reports are deterministic and carry the fixed schema") {
  RunConfig c;
  c.scenario = "central-extension";
  c.timing = false;
  const Report a = run(c), b = run(c);
  CHECK(a.all_pass());
  const nlohmann::json ja = to_json(a);
  CHECK(ja.dump() == to_json(b).dump());

  std::vector<std::string> keys;
  for (const auto& [k, v] : ja.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"checks", "config", "convergence", "version"});
  std::vector<std::string> row_keys;
  for (const auto& [k, v] : ja["checks"][0].items()) row_keys.push_back(k);
  CHECK(row_keys == std::vector<std::string>{"name", "paper_ref", "pass", "residual", "seconds", "tol"});
  CHECK(ja["version"] == kReportVersion);

  const std::string csv = to_csv(a);
  CHECK(csv.rfind("section,name,paper_ref,grid,residual,tol,pass,seconds\n", 0) == 0);
}

TEST_CASE("tolerance override turns rows red") {
  RunConfig c;
  c.scenario = "central-extension";
  c.tol = 1e-30;
  const Report r = run(c);
  CHECK_FALSE(r.all_pass());
  for (const auto& row : r.checks) CHECK(row.tol == 1e-30);
}

TEST_CASE("unwritable report path raises an I/O error") {
  Report r;
  r.config.out = "/nonexistent-dir/report.json";
  CHECK_THROWS_AS(write_report(r), std::ios_base::failure);
}

TEST_CASE("observed order of synthetic rows") {
  const std::vector<ConvergenceRow> rows = {{"x", 64, 1.0}, {"x", 128, 0.25}, {"x", 256, 0.0625}};
  CHECK(observed_order(rows) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(observed_order({rows[0]}), UsageError);
}

TEST_CASE("convergence tables") {
  const RunConfig c;
  const std::vector<int> grids{64, 128, 256};

  const auto fd = convergence_table("ext.d_alpha_eq_delta_R", grids, c);
  REQUIRE(fd.size() == 3);
  CHECK(fd[1].residual <= fd[0].residual);
  CHECK(fd[2].residual <= fd[1].residual);
  CHECK(observed_order(fd) >= 1.8);

  for (const auto& row : convergence_table("forms.delta_nerve_squared", grids, c)) CHECK(row.residual <= 1e-12);
  for (const auto& row : convergence_table("path.string_form_eq_omega3", grids, c)) CHECK(row.residual <= 1e-6);
}
