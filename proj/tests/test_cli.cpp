#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "spareops/cli.hpp"
#include "spareops/errors.hpp"

using namespace spareops;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json baseline_doc() {
  return json{{"q", 2},
              {"r", 39},
              {"lambda_sat_per_year", 0.05},
              {"mu_lv_days", 10.0},
              {"tau_lv_days", 10.0},
              {"c_build", 0.5},
              {"c_hold_per_year", 0.25},
              {"c_lv_unit", 0.03},
              {"c_lv_full", 7.5},
              {"m_sat", 150.0},
              {"m_payload", 300.0},
              {"rideshare_available", true},
              {"epsilon", 0.25}};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("spareops_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const json& doc) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << doc.dump(2);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error_key(const json& doc) {
  try {
    cli::parse_run_config(doc);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST_CASE("config parsing fills defaults") {
  const cli::RunConfig rc = cli::parse_run_config(baseline_doc());
  CHECK(rc.policy.q == 2);
  CHECK(rc.policy.n_sat_nominal == 40);
  CHECK(rc.policy.tau_mc_days == 0.5);
  CHECK(rc.q_range == IntRange{1, 10});
  CHECK(rc.r_range == IntRange{35, 45});
  CHECK(rc.horizon_days == doctest::Approx(20 * 365.25));
}

TEST_CASE("config errors name the offending key") {
  json doc = baseline_doc();
  doc["q"] = 0;
  CHECK(config_error_key(doc) == "q");
  doc = baseline_doc();
  doc.erase("epsilon");
  CHECK(config_error_key(doc) == "epsilon");
  doc = baseline_doc();
  doc["lambda"] = 0.1;
  CHECK(config_error_key(doc) == "lambda");
  doc = baseline_doc();
  doc["q"] = 2.5;
  CHECK(config_error_key(doc) == "q");
  doc = baseline_doc();
  doc["mu_lv_days"] = -1.0;
  CHECK(config_error_key(doc) == "mu_lv_days");
  doc = baseline_doc();
  doc["lambda_grid"] = json::array({0.2, 0.1});
  CHECK(config_error_key(doc).rfind("lambda_grid", 0) == 0);
  doc = baseline_doc();
  doc["horizon_days"] = 1.0;
  CHECK(config_error_key(doc) == "horizon_days");
}

TEST_CASE("grid and range specs") {
  const auto g = cli::parse_lambda_grid("0.001:0.5:log20");
  REQUIRE(g.size() == 20);
  CHECK(g.front() == 0.001);
  CHECK(g.back() == 0.5);
  CHECK(g[1] / g[0] == doctest::Approx(g[19] / g[18]));
  CHECK(cli::parse_lambda_grid("0.1:0.3:lin3")[1] == doctest::Approx(0.2));
  CHECK_THROWS_AS(cli::parse_lambda_grid("0.1:0.3"), ConfigError);
  CHECK_THROWS_AS(cli::parse_lambda_grid("0.3:0.1:lin3"), ConfigError);
  CHECK(cli::parse_int_range("3:7", "k") == IntRange{3, 7});
  CHECK_THROWS_AS(cli::parse_int_range("7:3", "k"), ConfigError);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit");
  const fs::path cfg = write_config(dir, baseline_doc());
  CHECK(cli::run({"analyze", "-c", cfg.string(), "-o", dir.string()}) == cli::kExitOk);

  json bad = baseline_doc();
  bad["q"] = 0;
  const fs::path bad_cfg = write_config(scratch("exit_bad"), bad);
  CHECK(cli::run({"analyze", "-c", bad_cfg.string(), "-o", dir.string()}) ==
        cli::kExitConfigError);
  CHECK(cli::run({"analyze"}) == cli::kExitConfigError);
  CHECK(cli::run({"analyze", "-c", (dir / "missing.json").string()}) == cli::kExitConfigError);

  json tight = baseline_doc();
  tight["epsilon"] = 0.0;
  const fs::path tdir = scratch("exit_infeasible");
  const fs::path tight_cfg = write_config(tdir, tight);
  CHECK(cli::run({"optimize", "-c", tight_cfg.string(), "-o", tdir.string(), "--q-range", "1:2",
                  "--r-range", "38:40"}) == cli::kExitInfeasible);
  CHECK(fs::exists(tdir / "grid.csv"));
  CHECK_FALSE(fs::exists(tdir / "optimum.json"));

  CHECK(cli::run({"validate", "-c", cfg.string(), "-o", dir.string(), "--reps", "2",
                  "--horizon-days", "365.25", "--assert-tolerance", "0"}) ==
        cli::kExitToleranceBreach);
}

TEST_CASE("analysis report contents") {
  const fs::path dir = scratch("report");
  const fs::path cfg = write_config(dir, baseline_doc());
  REQUIRE(cli::run({"analyze", "-c", cfg.string(), "-o", dir.string()}) == 0);
  const json report = json::parse(slurp(dir / "analysis.json"));
  CHECK(report["schema"] == "spareops.analysis/v1");
  CHECK(report["manifest"]["config"]["derived"]["lead_fixed_steps"] == 20);
  CHECK(report["lead_time"]["m"] == 20);
  CHECK(report["metrics"]["launch_mode"] == "full_contract");
  const json manifest = json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest.contains("started_at"));
  CHECK(manifest["outputs"][0] == "analysis.json");
}

TEST_CASE("outputs are byte-identical across runs") {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  const fs::path cfg = write_config(a, baseline_doc());
  for (const auto& dir : {a, b}) {
    REQUIRE(cli::run({"analyze", "-c", cfg.string(), "-o", dir.string()}) == 0);
    REQUIRE(cli::run({"optimize", "-c", cfg.string(), "-o", dir.string(), "--threads", "2"}) == 0);
    REQUIRE(cli::run({"validate", "-c", cfg.string(), "-o", dir.string(), "--reps", "3",
                      "--horizon-days", "730.5", "--lhs", "2", "--seed", "5"}) == 0);
  }
  for (const char* name : {"analysis.json", "grid.csv", "optimum.json", "validation.csv"}) {
    CAPTURE(name);
    CHECK(slurp(a / name) == slurp(b / name));
  }
}
