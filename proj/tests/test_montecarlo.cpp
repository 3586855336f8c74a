#include "doctest.h"
#include "oracle.hpp"

#include <set>

#include "spareops/errors.hpp"
#include "spareops/metrics.hpp"
#include "spareops/montecarlo.hpp"
#include "spareops/policy_analysis.hpp"

using namespace spareops;
using doctest::Approx;

namespace {

PolicyConfig baseline() {
  PolicyConfig cfg;
  cfg.q = 2;
  cfg.r = 39;
  return cfg;
}

PolicyConfig small_plane() {
  PolicyConfig cfg;
  cfg.q = 2;
  cfg.r = 2;
  cfg.n_sat_nominal = 4;
  cfg.tau_mc_days = 1.0;
  cfg.days_per_year = 1.0;
  cfg.lambda_sat_per_year = 0.05;
  cfg.mu_lv_days = 3.0;
  cfg.tau_lv_days = 2.0;
  return cfg;
}

}  // namespace

TEST_CASE("same seed, same histogram regardless of threads") {
  const PolicyConfig cfg = baseline();
  const SimStats a = simulate(cfg, 3650.0, 8, 99, 1);
  const SimStats b = simulate(cfg, 3650.0, 8, 99, 4);
  CHECK(a.counts == b.counts);
  CHECK(a.m_sim == b.m_sim);
  const SimStats c = simulate(cfg, 3650.0, 8, 100, 1);
  CHECK(a.counts != c.counts);
  CHECK(a.horizon_steps == 7300);
  CHECK(std::accumulate(a.counts.begin(), a.counts.end(), std::uint64_t{0}) == 8u * 7300u);
}

TEST_CASE("simulation converges to the exact joint chain") {
  const PolicyConfig cfg = small_plane();
  const auto ref = oracle::joint_chain(
      oracle::failure_matrix(cfg.n_sat(), cfg.n_sat_nominal, cfg.lambda_step()), cfg.n_sat(),
      cfg.q, cfg.r, cfg.lead_alpha(), cfg.lead_fixed_steps());
  const SimStats sim = simulate(cfg, 200000.0, 20, 3, 1);
  // 4e6 steps with cycles of ~30 steps: TV noise is well under 0.01.
  CHECK(0.5 * (sim.histogram.probs() - ref.stock).cwiseAbs().sum() < 0.01);
}

TEST_CASE("burn-in rule") {
  const PolicyConfig cfg = baseline();
  const long horizon = 14610;
  const double k_lt = 20 + 1 + cfg.lead_alpha() / (1 - cfg.lead_alpha());
  const long expected = std::max({static_cast<long>(std::ceil(10 * k_lt)), 731L,
                                  static_cast<long>(std::ceil(8.0 / cfg.lambda_step()))});
  CHECK(burn_in_steps(cfg, horizon) == expected);
  // Very slow planes are capped at ten horizons.
  PolicyConfig slow = cfg;
  slow.lambda_sat_per_year = 1e-6;
  CHECK(burn_in_steps(slow, 1000) == 10000);
}

TEST_CASE("argument checks") {
  const PolicyConfig cfg = baseline();
  CHECK_THROWS_AS(simulate(cfg, 10.0, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(simulate(cfg, 3650.0, 0, 1), std::invalid_argument);
  PolicyConfig other = cfg;
  other.r = 38;
  CHECK_THROWS_AS(validate(other, analyze(cfg), 3650.0, 2, 1), MismatchError);
}

TEST_CASE("relative error of a vanishing shortage uses the floor") {
  PolicyConfig cfg;
  cfg.q = 10;
  cfg.r = 45;
  cfg.lambda_sat_per_year = 0.001;
  const AnalysisResult res = analyze(cfg);
  const SimStats sim = validate(cfg, res, 3650.0, 2, 1);
  REQUIRE(sim.rel_err_s.has_value());
  CHECK(std::isfinite(*sim.rel_err_s));
  const double s = expected_shortage(res.pi_rc, 40);
  CHECK(*sim.rel_err_s == Approx(std::abs(sim.s_sim - s) / std::max(s, kShortageFloor)));
}

TEST_CASE("latin hypercube stays in the box and stratifies") {
  const ParameterBox box = ParameterBox::standard(40);
  const int n = 10;
  const auto cases = latin_hypercube(baseline(), box, n, 42);
  REQUIRE(cases.size() == n);
  std::set<int> lam_strata, mu_strata, q_vals, r_vals;
  for (const auto& c : cases) {
    CHECK(c.lambda_sat_per_year >= box.lambda_lo);
    CHECK(c.lambda_sat_per_year <= box.lambda_hi);
    CHECK(c.tau_lv_days >= box.tau_lv_lo);
    CHECK(c.tau_lv_days <= box.tau_lv_hi);
    CHECK(c.lead_time_grid_aligned());
    CHECK(c.mu_lv_days >= box.mu_lv_lo);
    CHECK(c.mu_lv_days <= box.mu_lv_hi);
    CHECK(box.q.contains(c.q));
    CHECK(box.r.contains(c.r));
    lam_strata.insert(static_cast<int>((c.lambda_sat_per_year - box.lambda_lo) /
                                       (box.lambda_hi - box.lambda_lo) * n));
    mu_strata.insert(
        static_cast<int>((c.mu_lv_days - box.mu_lv_lo) / (box.mu_lv_hi - box.mu_lv_lo) * n));
    q_vals.insert(c.q);
    r_vals.insert(c.r);
  }
  CHECK(lam_strata.size() == n);
  CHECK(mu_strata.size() == n);
  CHECK(q_vals.size() == 10);  // ten strata over ten values
  CHECK(r_vals.size() >= 9);   // ten strata over eleven values
  CHECK(latin_hypercube(baseline(), box, n, 42) == cases);
}

TEST_CASE("suite of one case equals a direct validation") {
  const PolicyConfig base = baseline();
  const ParameterBox box = ParameterBox::standard(40);
  const auto suite = lhs_validation_suite(base, box, 1, 3650.0, 4, 17, 1);
  const auto cfg = latin_hypercube(base, box, 1, 17).front();
  const auto row = validate_case(0, cfg, 3650.0, 4, case_seed(17, 0), 1);
  REQUIRE(suite.rows.size() == 1);
  REQUIRE(suite.rows[0].sim.has_value());
  CHECK(suite.rows[0].sim->counts == row.sim->counts);
  CHECK(suite.mean_rel_err_m == *row.sim->rel_err_m);
  CHECK(case_seed(17, 0) != case_seed(17, 1));
}

TEST_CASE("summary statistics") {
  std::vector<ValidationRow> rows(4);
  const double errs[] = {0.01, 0.04, 0.02, 0.03};
  for (int i = 0; i < 4; ++i) {
    rows[i].case_id = i;
    rows[i].sim = simulate(baseline(), 365.25, 1, 1, 1);
    rows[i].sim->rel_err_m = errs[i];
    rows[i].sim->rel_err_s = 2 * errs[i];
  }
  rows.push_back(ValidationRow{.case_id = 4, .error = "boom"});
  const auto s = summarize_validation(std::move(rows));
  CHECK(s.failed_cases == 1);
  CHECK(s.mean_rel_err_m == Approx(0.025));
  CHECK(s.p95_rel_err_m == Approx(0.04));
  CHECK(s.p95_rel_err_s == Approx(0.08));
}
