#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "reports.hpp"
#include "spareops/errors.hpp"
#include "spareops/metrics.hpp"

namespace spareops::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  unsigned threads = 0;
  std::string q_range;
  std::string r_range;
  std::string lambda_spec;
  std::optional<int> reps;
  std::optional<double> horizon_days;
  std::optional<std::uint64_t> seed;
  int lhs_cases = 0;
  std::optional<double> assert_tolerance_pct;
};

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

// Resolves the config file plus command-line overrides and the seed
// environment variable.
RunConfig resolve(const Options& opt) {
  RunConfig rc = load_run_config(opt.config_path);
  if (!opt.q_range.empty()) rc.q_range = parse_int_range(opt.q_range, "--q-range");
  if (!opt.r_range.empty()) rc.r_range = parse_int_range(opt.r_range, "--r-range");
  if (rc.q_range.lo < 1) throw ConfigError("--q-range", "q must be >= 1");
  if (rc.r_range.lo < 0) throw ConfigError("--r-range", "r must be >= 0");
  if (!opt.lambda_spec.empty()) rc.lambda_grid = parse_lambda_grid(opt.lambda_spec);
  if (opt.reps) {
    if (*opt.reps < 1) throw ConfigError("--reps", "must be >= 1");
    rc.n_reps = *opt.reps;
  }
  if (opt.horizon_days) {
    if (!(*opt.horizon_days >= 100.0 * rc.policy.tau_mc_days)) {
      throw ConfigError("--horizon-days", "must cover at least 100 Markov steps");
    }
    rc.horizon_days = *opt.horizon_days;
  }
  if (const char* env = std::getenv("SPAREOPS_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      rc.seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw ConfigError("SPAREOPS_SEED", "expected a non-negative integer");
    }
  }
  if (opt.seed) rc.seed = *opt.seed;
  if (!rc.policy.lead_time_grid_aligned()) {
    std::cerr << fmt::format(
        "warning: tau_lv_days={} is not a multiple of tau_mc_days={}; the fixed delay is "
        "rounded up to {} steps\n",
        rc.policy.tau_lv_days, rc.policy.tau_mc_days, rc.policy.lead_fixed_steps());
  }
  return rc;
}

void write_manifest(const fs::path& dir, json manifest, const std::string& started,
                    const std::vector<std::string>& outputs, const json& extra = json()) {
  manifest["started_at"] = started;
  manifest["finished_at"] = utc_now();
  manifest["outputs"] = outputs;
  if (!extra.is_null()) manifest["summary"] = extra;
  auto out = open_output(dir / "manifest.json");
  out << manifest.dump(2) << '\n';
}

int cmd_analyze(const Options& opt) {
  const std::string started = utc_now();
  const RunConfig rc = resolve(opt);
  const json manifest = manifest_block("analyze", rc, json::object());
  const AnalysisResult res = analyze(rc.policy);
  const json report = analysis_report(res, manifest);

  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  {
    auto out = open_output(dir / "analysis.json");
    out << report.dump(2) << '\n';
  }
  write_manifest(dir, manifest, started, {"analysis.json"});

  const auto& m = report["metrics"];
  std::cout << fmt::format(
      "q={} r={}  tau_rc={:.4f} d (io {:.4f}, lt {:.4f})\n"
      "M={:.6f} S={:.6f}\n"
      "C_total={:.6f} M$/day  (build {:.6f}, hold {:.6f}, launch {:.6f}, {})\n"
      "g1={:.6g} g2={:.6g} feasible={}\n",
      rc.policy.q, rc.policy.r, res.tau_rc_days, res.tau_io_days, res.tau_lt_days,
      m["mean_stock"].get<double>(), m["expected_shortage"].get<double>(),
      m["c_total"].get<double>(), m["c_build"].get<double>(), m["c_hold"].get<double>(),
      m["c_launch"].get<double>(), m["launch_mode"].get<std::string>(), m["g1"].get<double>(),
      m["g2"].get<double>(), m["feasible"].get<bool>());
  return kExitOk;
}

int cmd_optimize(const Options& opt) {
  const std::string started = utc_now();
  const RunConfig rc = resolve(opt);
  const json manifest = manifest_block("optimize", rc, json::object());
  std::vector<GridRecord> grid = evaluate_grid(rc.policy, rc.q_range, rc.r_range, opt.threads);

  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  {
    auto out = open_output(dir / "grid.csv");
    write_grid_csv(out, grid, manifest);
  }

  try {
    const OptimizationResult best = select_optimum(std::move(grid), rc.q_range, rc.r_range);
    const GridRecord& b = best.best;
    const json summary{{"q_star", b.q},
                       {"r_star", b.r},
                       {"c_build", b.costs.c_build_rate},
                       {"c_hold", b.costs.c_hold_rate},
                       {"c_launch", b.costs.c_launch_rate},
                       {"c_total", b.costs.c_total_rate},
                       {"S", b.shortage},
                       {"g1", b.constraints.g1},
                       {"g2", b.constraints.g2},
                       {"launch_mode", to_string(b.costs.launch_mode)},
                       {"tau_rc_days", b.tau_rc_days}};
    {
      auto out = open_output(dir / "optimum.json");
      out << json{{"schema", "spareops.optimum/v1"}, {"manifest", manifest}, {"best", summary}}
                 .dump(2)
          << '\n';
    }
    write_manifest(dir, manifest, started, {"grid.csv", "optimum.json"}, summary);
    std::cout << fmt::format(
        "best (q, r) = ({}, {})  C_total={:.6f} M$/day  (build {:.6f}, hold {:.6f}, launch "
        "{:.6f}, {})  S={:.6f}  tau_rc={:.4f} d\n",
        b.q, b.r, b.costs.c_total_rate, b.costs.c_build_rate, b.costs.c_hold_rate,
        b.costs.c_launch_rate, to_string(b.costs.launch_mode), b.shortage, b.tau_rc_days);
    return kExitOk;
  } catch (const InfeasibleDesignError& e) {
    const GridRecord& d = e.diagnostic();
    write_manifest(dir, manifest, started, {"grid.csv"},
                   json{{"infeasible", true}, {"min_S_q", d.q}, {"min_S_r", d.r},
                        {"min_S", d.shortage}, {"g2", d.constraints.g2}});
    std::cerr << fmt::format("infeasible: {}; smallest S={:.6g} at (q, r) = ({}, {}), g2={:.6g}\n",
                             e.what(), d.shortage, d.q, d.r, d.constraints.g2);
    return kExitInfeasible;
  }
}

int cmd_sweep(const Options& opt) {
  const std::string started = utc_now();
  const RunConfig rc = resolve(opt);
  if (rc.lambda_grid.empty()) {
    throw ConfigError("lambda_grid", "sweep needs --lambda or a lambda_grid config key");
  }
  const json manifest = manifest_block("sweep", rc, json::object());
  const auto points =
      sweep_failure_rate(rc.policy, rc.lambda_grid, rc.q_range, rc.r_range, opt.threads);

  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  {
    auto out = open_output(dir / "sweep.csv");
    write_sweep_csv(out, points, manifest);
  }
  write_manifest(dir, manifest, started, {"sweep.csv"});

  for (const auto& pt : points) {
    if (pt.result) {
      const auto& b = pt.result->best;
      std::cout << fmt::format("lambda={:<10.6g} (q, r)=({}, {})  C_total={:.6f}  {}\n",
                               pt.lambda_sat_per_year, b.q, b.r, b.costs.c_total_rate,
                               to_string(b.costs.launch_mode));
    } else {
      std::cout << fmt::format("lambda={:<10.6g} {}\n", pt.lambda_sat_per_year, pt.error);
    }
  }
  return kExitOk;
}

int cmd_validate(const Options& opt) {
  const std::string started = utc_now();
  const RunConfig rc = resolve(opt);
  json options{{"lhs_cases", opt.lhs_cases}};
  if (opt.assert_tolerance_pct) options["assert_tolerance_pct"] = *opt.assert_tolerance_pct;
  const json manifest = manifest_block("validate", rc, options);

  ValidationSummary summary;
  if (opt.lhs_cases > 0) {
    summary = lhs_validation_suite(rc.policy, ParameterBox::standard(rc.policy.n_sat_nominal),
                                   opt.lhs_cases, rc.horizon_days, rc.n_reps, rc.seed,
                                   opt.threads);
  } else {
    std::vector<ValidationRow> rows;
    rows.push_back(validate_case(0, rc.policy, rc.horizon_days, rc.n_reps, rc.seed, opt.threads));
    summary = summarize_validation(std::move(rows));
  }

  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  {
    auto out = open_output(dir / "validation.csv");
    write_validation_csv(out, summary, manifest);
  }
  const json stats{{"cases", summary.rows.size()},
                   {"failed_cases", summary.failed_cases},
                   {"mean_rel_err_m", summary.mean_rel_err_m},
                   {"p95_rel_err_m", summary.p95_rel_err_m},
                   {"mean_rel_err_s", summary.mean_rel_err_s},
                   {"p95_rel_err_s", summary.p95_rel_err_s}};
  write_manifest(dir, manifest, started, {"validation.csv"}, stats);

  std::cout << fmt::format("{:>4} {:>10} {:>7} {:>7} {:>3} {:>3} {:>12} {:>12} {:>10} {:>10}\n",
                           "case", "lambda", "tau_lv", "mu_lv", "q", "r", "M_analytic",
                           "S_analytic", "err_M[%]", "err_S[%]");
  for (const auto& row : summary.rows) {
    const PolicyConfig& c = row.config;
    if (!row.sim) {
      std::cout << fmt::format("{:>4} failed: {}\n", row.case_id, row.error);
      continue;
    }
    std::cout << fmt::format("{:>4} {:>10.5g} {:>7.3g} {:>7.4g} {:>3} {:>3} {:>12.6f} {:>12.6g} "
                             "{:>10.4f} {:>10.4f}\n",
                             row.case_id, c.lambda_sat_per_year, c.tau_lv_days, c.mu_lv_days, c.q,
                             c.r, row.m_analytic, row.s_analytic, 100.0 * *row.sim->rel_err_m,
                             100.0 * *row.sim->rel_err_s);
  }
  std::cout << fmt::format(
      "relative error of M: mean {:.4f}%  P95 {:.4f}%\n"
      "relative error of S: mean {:.4f}%  P95 {:.4f}%\n",
      100.0 * summary.mean_rel_err_m, 100.0 * summary.p95_rel_err_m,
      100.0 * summary.mean_rel_err_s, 100.0 * summary.p95_rel_err_s);

  if (opt.assert_tolerance_pct) {
    const double tol = *opt.assert_tolerance_pct / 100.0;
    bool breach = summary.failed_cases > 0;
    for (const auto& row : summary.rows) {
      if (row.sim && (*row.sim->rel_err_m > tol || *row.sim->rel_err_s > tol)) breach = true;
    }
    if (breach) {
      std::cerr << fmt::format("validation exceeded the {}% tolerance\n",
                               *opt.assert_tolerance_pct);
      return kExitToleranceBreach;
    }
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Analytic evaluation and optimisation of (r, q) spare policies for satellite "
               "constellations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SPAREOPS_VERSION);

  Options opt;
  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("-c,--config", opt.config_path, "JSON config file")->required();
    sub->add_option("-o,--out", opt.out_dir, "output directory")->capture_default_str();
    sub->add_option("--threads", opt.threads, "worker threads, 0 = hardware concurrency");
  };
  auto add_bounds = [&opt](CLI::App* sub) {
    sub->add_option("--q-range", opt.q_range, "order-size bounds lo:hi");
    sub->add_option("--r-range", opt.r_range, "reorder-point bounds lo:hi");
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "evaluate one (q, r) policy");
  add_common(analyze_cmd);

  auto* optimize_cmd = app.add_subcommand("optimize", "grid search for the cheapest feasible policy");
  add_common(optimize_cmd);
  add_bounds(optimize_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "optimise across a range of failure rates");
  add_common(sweep_cmd);
  add_bounds(sweep_cmd);
  sweep_cmd->add_option("--lambda", opt.lambda_spec, "failure-rate grid start:stop:logN|linN");

  auto* validate_cmd = app.add_subcommand("validate", "compare against Monte Carlo simulation");
  add_common(validate_cmd);
  validate_cmd->add_option("--reps", opt.reps, "replications per case");
  validate_cmd->add_option("--horizon-days", opt.horizon_days, "recorded span per replication");
  validate_cmd->add_option("--seed", opt.seed, "root seed (overrides config and SPAREOPS_SEED)");
  validate_cmd->add_option("--lhs", opt.lhs_cases, "number of Latin hypercube cases");
  validate_cmd->add_option("--assert-tolerance", opt.assert_tolerance_pct,
                           "fail with exit code 3 if any relative error exceeds this percentage");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (analyze_cmd->parsed()) return cmd_analyze(opt);
    if (optimize_cmd->parsed()) return cmd_optimize(opt);
    if (sweep_cmd->parsed()) return cmd_sweep(opt);
    if (validate_cmd->parsed()) return cmd_validate(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitConfigError;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("spareops");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace spareops::cli
