// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "sdc/harness/config.hpp"
#include "sdc/harness/presets.hpp"
#include "sdc/harness/run.hpp"

namespace fs = std::filesystem;
using namespace sdc;
using namespace sdc::harness;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sdc_harness_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

int cli(const std::string& args) {
  const std::string command = std::string(SDC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config files: comments, whitespace and errors") {
  const auto dir = scratch("config");
  {
    std::ofstream out(dir / "run.cfg");
    out << "# comment\n\npreset = dahlquist   # trailing\n  eps-tol=1e-6\nstrategy = dt-adaptive\n";
  }
  const auto entries = read_config_file((dir / "run.cfg").string());
  CHECK(entries.at("preset") == "dahlquist");
  CHECK(entries.at("eps-tol") == "1e-6");
  CHECK(entries.size() == 3);

  {
    std::ofstream out(dir / "bad.cfg");
    out << "preset dahlquist\n";
  }
  CHECK_THROWS_AS(read_config_file((dir / "bad.cfg").string()), ConfigError);
  CHECK_THROWS_AS(read_config_file((dir / "missing.cfg").string()), ConfigError);
}

TEST_CASE("resolve: preset defaults, strategy-dependent defaults and validation") {
  CHECK(preset_ids().size() == 6);
  for (const auto& id : preset_ids()) CHECK_NOTHROW(resolve({{"preset", id}}));

  auto c = resolve({{"preset", "vdp"}, {"strategy", "dtk-adaptive"}, {"eps-tol", "1e-6"}});
  CHECK(c.nodes == 4);
  CHECK(c.controller.k_max == 16);
  CHECK(c.controller.r_tol == doctest::Approx(1e-11));
  CHECK(c.inner == InnerMode::automatic);

  c = resolve({{"preset", "quench"}, {"strategy", "dtk-adaptive"}, {"eps-tol", "1e-5"}});
  CHECK(c.controller.r_tol == doctest::Approx(1e-6));

  c = resolve({{"preset", "dahlquist"}, {"strategy", "dt-adaptive"}});
  CHECK(c.nodes == 3);
  CHECK(c.controller.k_max == 5);
  c = resolve({{"preset", "dahlquist"}, {"strategy", "k-adaptive"}});
  CHECK(c.controller.k_max == 16);
  c = resolve({{"preset", "dahlquist"}, {"strategy", "dtk-adaptive"}, {"M", "5"}, {"r-tol", "1e-9"}});
  CHECK(c.nodes == 5);
  CHECK(c.controller.r_tol == 1e-9);

  c = resolve({{"preset", "quench"}, {"cells", "64"}, {"t-end", "10"}});
  CHECK(c.params.at("cells") == "64");
  CHECK(c.t_end == 10.0);

  CHECK_THROWS_AS(resolve({{"preset", "lorenz"}}), UnknownPreset);
  CHECK_THROWS_AS(resolve({}), ConfigError);
  CHECK_THROWS_AS(resolve({{"preset", "dahlquist"}, {"eps-tol", "small"}}), ConfigError);
  CHECK_THROWS_AS(resolve({{"preset", "dahlquist"}, {"colour", "blue"}}), ConfigError);
  CHECK_THROWS_AS(resolve({{"preset", "dahlquist"}, {"cells", "64"}}), ConfigError);
  CHECK_THROWS_AS(resolve({{"preset", "dahlquist"}, {"strategy", "pid"}}), ConfigError);
  CHECK_THROWS_AS(resolve({{"preset", "dahlquist"}, {"gamma", "0.5"}}), ConfigError);
  CHECK_THROWS_AS(resolve({{"preset", "dahlquist"}, {"M", "2.5"}}), ConfigError);
  CHECK_THROWS_AS(resolve({{"preset", "dahlquist"}, {"t-end", "-1"}}), ConfigError);
  CHECK_THROWS_AS(resolve({{"preset", "nls"}, {"n", "48"}}), ConfigError);
}

TEST_CASE("run telemetry: steps.csv and a summary recomputable from it") {
  const auto dir = scratch("telemetry");
  auto config = resolve({{"preset", "dahlquist"}, {"strategy", "dt-adaptive"}, {"eps-tol", "1e-8"}});
  Experiment experiment(config);
  auto result = execute(experiment);
  REQUIRE_FALSE(result.aborted);
  result.global_error = relative_error(result.record.final_state, reference_solution(config), Field::real);
  write_steps_csv(dir / "steps.csv", result.record.steps);
  write_summary_json(dir / "summary.json", config, result);

  const auto rows = read_csv(dir / "steps.csv");
  REQUIRE(rows.size() == result.record.steps.size() + 1);
  CHECK(rows[0] == std::vector<std::string>{"step_index", "t", "dt", "k", "eps", "residual", "accepted",
                                            "restart_reason", "newton_iters"});
  double last_t = -1.0;
  long accepted = 0, restarts = 0, sweeps = 0, newton = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 9);
    const double t = std::stod(rows[i][1]);
    CHECK(t >= last_t);
    last_t = t;
    sweeps += std::stol(rows[i][3]);
    newton += std::stol(rows[i][8]);
    if (rows[i][6] == "1") {
      ++accepted;
      CHECK(std::stod(rows[i][4]) <= 1e-8);
      CHECK(rows[i][7].empty());
    } else {
      ++restarts;
      CHECK_FALSE(rows[i][7].empty());
    }
  }

  std::ifstream in(dir / "summary.json");
  const auto j = nlohmann::json::parse(in);
  CHECK(j["steps"] == accepted);
  CHECK(j["restarts"] == restarts);
  CHECK(j["sweeps"] == sweeps);
  CHECK(j["newton_iters"] == newton);
  CHECK(j["aborted"] == false);
  CHECK(j["global_error"].get<double>() <= 1e-6);
  CHECK(j["preset"] == "dahlquist");

  const auto again = execute(Experiment(config));
  REQUIRE(again.record.steps.size() == result.record.steps.size());
  for (std::size_t i = 0; i < again.record.steps.size(); ++i) {
    CHECK(again.record.steps[i].dt == result.record.steps[i].dt);
    CHECK(again.record.steps[i].eps == result.record.steps[i].eps);
  }
}

TEST_CASE("snapshots carry grid metadata") {
  const auto dir = scratch("snapshot");
  auto problem = make_problem("quench", {{"cells", "32"}});
  const State u(problem->size(), 0.25);
  write_snapshot(dir, "snap", *problem, u, 3.0);
  std::ifstream in(dir / "snap.json");
  const auto j = nlohmann::json::parse(in);
  CHECK(j["shape"] == std::vector<int>{32});
  CHECK(j["t"] == 3.0);
  CHECK(read_csv(dir / "snap.csv").size() == 33);

  auto nls = make_problem("nls", {{"n", "16"}});
  CHECK(state_shape(*nls) == std::vector<int>{16, 16});
  write_snapshot(dir, "field", *nls, nls->initial_state(), 0.0);
  std::ifstream in2(dir / "field.json");
  const auto j2 = nlohmann::json::parse(in2);
  CHECK(j2["field"] == "complex");
  CHECK(read_csv(dir / "field.csv").size() == 16 * 16 + 1);

  auto ac = make_problem("allen-cahn", {{"n", "32"}});
  const auto d = diagnostics(*ac, ac->initial_state());
  bool has_radius = false;
  for (const auto& [name, value] : d)
    if (name == "radius") has_radius = std::abs(value - 0.25) <= 2.0 / 32;
  CHECK(has_radius);
}

TEST_CASE("work-precision slopes on u' = -u") {
  const Entries base{{"preset", "dahlquist"}};
  const std::vector<double> tols{1e-5, 1e-6, 1e-7, 1e-8, 1e-9};
  const std::vector<double> dts{0.1, 0.05, 0.025, 0.0125};
  const auto rows = work_precision(base, {Strategy::fixed, Strategy::dt_adaptive}, tols, dts);
  REQUIRE(rows.size() == tols.size() + dts.size());
  std::vector<double> fixed_err, dt_err;
  for (const auto& r : rows) {
    CHECK(std::isfinite(r.error));
    (r.strategy == Strategy::fixed ? fixed_err : dt_err).push_back(r.error);
  }
  CAPTURE(loglog_slope(dts, fixed_err));
  CAPTURE(loglog_slope(tols, dt_err));
  CHECK(std::abs(loglog_slope(dts, fixed_err) - 5.0) <= 0.3);
  CHECK(std::abs(loglog_slope(tols, dt_err) - 1.0) <= 0.2);

  const auto dir = scratch("wp");
  write_work_precision_csv(dir / "wp.csv", rows);
  const auto csv = read_csv(dir / "wp.csv");
  CHECK(csv[0] == std::vector<std::string>{"strategy", "control", "error", "wall_seconds", "sweeps", "newton",
                                           "restarts"});
  CHECK(csv.size() == rows.size() + 1);

  // An aborted sub-run becomes a NaN row and the sweep goes on.
  const auto aborted =
      work_precision({{"preset", "dahlquist"}, {"restart-budget", "0"}}, {Strategy::dt_adaptive}, {1e-14, 1e-5}, {});
  REQUIRE(aborted.size() == 2);
  CHECK(std::isnan(aborted[0].error));
  CHECK(std::isfinite(aborted[1].error));
}

TEST_CASE("convergence ladder: one order per sweep up to the collocation order") {
  const Entries base{{"preset", "dahlquist"}, {"t-end", "1"}};
  const std::vector<double> dts{0.1, 0.05, 0.025, 0.0125};
  const auto rows = convergence(base, {1, 2, 3, 5, 6, 7}, dts);
  std::map<int, std::vector<double>> err;
  for (const auto& r : rows) err[r.sweeps].push_back(r.error);
  CHECK(std::abs(loglog_slope(dts, err[1]) - 1.0) <= 0.2);
  CHECK(std::abs(loglog_slope(dts, err[2]) - 2.0) <= 0.3);
  CHECK(std::abs(loglog_slope(dts, err[3]) - 3.0) <= 0.3);
  CHECK(std::abs(loglog_slope(dts, err[5]) - 5.0) <= 0.3);
  // radau-right M = 3 collocation is order 5.
  CHECK(std::abs(loglog_slope(dts, err[6]) - 5.0) <= 0.3);
  CHECK(std::abs(loglog_slope(dts, err[7]) - 5.0) <= 0.3);
  CHECK(std::isnan(rows.front().order));
}

TEST_CASE("loglog slope") {
  CHECK(loglog_slope({1, 2, 4}, {1, 4, 16}) == doctest::Approx(2.0));
  CHECK(loglog_slope({1, 2, 4, 8}, {1, 4, std::nan(""), 64}) == doctest::Approx(2.0));
}

TEST_CASE("command line: outputs and exit codes") {
  const auto dir = scratch("cli");
  const auto ok_dir = dir / "ok";
  CHECK(cli("run --preset dahlquist --strategy dt-adaptive --eps-tol 1e-8 --output-dir " + ok_dir.string()) == 0);
  CHECK(fs::exists(ok_dir / "steps.csv"));
  CHECK(fs::exists(ok_dir / "summary.json"));
  CHECK(fs::exists(ok_dir / "snapshot.json"));

  const auto missing_dir = dir / "missing";
  CHECK(cli("run --config " + (dir / "nope.cfg").string() + " --output-dir " + missing_dir.string()) == 1);
  CHECK_FALSE(fs::exists(missing_dir));

  CHECK(cli("run --preset lorenz --output-dir " + (dir / "unknown").string()) == 1);
  CHECK_FALSE(fs::exists(dir / "unknown"));
  CHECK(cli("run --preset dahlquist --eps-tol abc") == 1);
  CHECK(cli("run --preset dahlquist --no-such-flag") == 1);

  const auto abort_dir = dir / "abort";
  CHECK(cli("run --preset dahlquist --strategy dt-adaptive --eps-tol 1e-15 -p restart-budget=0 --output-dir " +
            abort_dir.string()) == 2);
  std::ifstream in(abort_dir / "summary.json");
  const auto j = nlohmann::json::parse(in);
  CHECK(j["aborted"] == true);
  CHECK_FALSE(fs::exists(abort_dir / "snapshot.json"));

  const auto wp = dir / "wp.csv";
  CHECK(cli("work-precision --preset dahlquist --strategies dt-adaptive --tolerances 1e-6,1e-7 -o " + wp.string()) ==
        0);
  CHECK(read_csv(wp).size() == 3);
  CHECK(cli("convergence --preset dahlquist --sweeps 1,2 --dts 0.1,0.05 -o " + (dir / "conv.csv").string()) == 0);
  CHECK(read_csv(dir / "conv.csv").size() == 5);
}
