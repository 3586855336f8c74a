#include "doctest.h"

#include "spareops/metrics.hpp"
#include "spareops/policy_analysis.hpp"

using namespace spareops;
using doctest::Approx;

namespace {

StateDistribution three_point() {
  // States 4..0: P(4) = 0.2, P(3) = 0.5, P(1) = 0.3.
  Eigen::VectorXd v(5);
  v << 0.2, 0.5, 0.0, 0.3, 0.0;
  return StateDistribution(v);
}

}  // namespace

TEST_CASE("moments of a hand distribution") {
  const StateDistribution d = three_point();
  CHECK(mean_stock(d) == Approx(0.8 + 1.5 + 0.3));
  CHECK(expected_shortage(d, 3) == Approx(0.3 * 2));
  CHECK(expected_spares(d, 3) == Approx(0.2));
  CHECK(expected_shortage(d, 5) == Approx(5 - 2.6));
}

TEST_CASE("cost rates follow the per-cycle accounting") {
  PolicyConfig cfg;
  cfg.q = 2;
  cfg.r = 2;
  cfg.n_sat_nominal = 3;
  cfg.n_orbit = 10;
  const double tau = 200.0;
  const CostBreakdown c = cost_breakdown(three_point(), tau, cfg);
  CHECK(c.c_build_rate == Approx(0.5 * 2 * 10 / 200.0));
  CHECK(c.c_hold_rate == Approx(0.25 / 365.25 * 10 * 0.2));
  // 300 kg at 0.03 M$/kg is 9 M$, dearer than the 7.5 M$ full contract.
  CHECK(c.launch_mode == LaunchMode::full_contract);
  CHECK(c.c_launch_rate == Approx(7.5 * 10 / 200.0));
  CHECK(c.c_total_rate == Approx(c.c_build_rate + c.c_hold_rate + c.c_launch_rate));
  CHECK(c.m_total == 300.0);

  cfg.q = 1;
  const CostBreakdown one = cost_breakdown(three_point(), tau, cfg);
  CHECK(one.launch_mode == LaunchMode::per_unit);
  CHECK(one.c_launch_rate == Approx(4.5 * 10 / 200.0));

  cfg.rideshare_available = false;
  CHECK(cost_breakdown(three_point(), tau, cfg).launch_mode == LaunchMode::full_contract);

  // Equal prices go to the full contract.
  cfg.rideshare_available = true;
  cfg.c_lv_unit = 0.05;
  CHECK(cost_breakdown(three_point(), tau, cfg).launch_mode == LaunchMode::full_contract);
  CHECK_THROWS_AS(cost_breakdown(three_point(), 0.0, cfg), std::invalid_argument);
}

TEST_CASE("baseline metrics") {
  PolicyConfig cfg;
  cfg.q = 2;
  cfg.r = 39;
  const AnalysisResult res = analyze(cfg);
  const CostBreakdown c = cost_breakdown(res, cfg);
  CHECK(c.c_build_rate == Approx(40 * 0.5 * 2 / res.tau_rc_days));
  CHECK(c.c_launch_rate == Approx(40 * 7.5 / res.tau_rc_days));
  const ConstraintValues g = constraint_eval(res, cfg);
  CHECK(g.g2 == 0.0);
  CHECK(g.g1 == Approx(expected_shortage(res.pi_rc, 40) - 0.25));
  CHECK(g.feasible());
  cfg.q = 3;
  CHECK(constraint_eval(analyze(cfg), cfg).g2 == 150.0);
}

TEST_CASE("launch mode names") {
  CHECK(to_string(LaunchMode::per_unit) == "per_unit");
  CHECK(to_string(LaunchMode::full_contract) == "full_contract");
}
