#include "doctest.h"
#include "oracle.hpp"

#include <random>

#include "spareops/errors.hpp"
#include "spareops/markov_core.hpp"
#include "spareops/state_distribution.hpp"

using namespace spareops;
using doctest::Approx;

TEST_CASE("failure pmf matches hand values") {
  // Two operational satellites at 0.1 failures per step: Poisson mean 0.2.
  CHECK(failure_pmf(2, 1, 0.1, 40) == Approx(0.163746).epsilon(1e-6));
  CHECK(failure_pmf(2, 0, 0.1, 40) == Approx(0.818731).epsilon(1e-6));
  // Satellites above the nominal count are spares and do not fail.
  CHECK(failure_pmf(45, 0, 0.01, 40) == Approx(std::exp(-0.4)));
  CHECK(failure_pmf(45, 41, 0.01, 40) == 0.0);
  CHECK_THROWS_AS(failure_pmf(-1, 0, 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(failure_pmf(2, 0, 0.0, 1), std::invalid_argument);
}

TEST_CASE("failure matrix small example") {
  const Eigen::MatrixXd p = build_failure_matrix(2, 1, 0.1);
  REQUIRE(p.rows() == 3);
  CHECK(p(0, 0) == Approx(0.904837).epsilon(1e-6));
  CHECK(p(1, 0) == Approx(0.090484).epsilon(1e-5));
  CHECK(p(2, 0) == Approx(0.004679).epsilon(1e-4));
  CHECK(p(0, 1) == 0.0);
  CHECK(p(1, 1) == Approx(0.904837).epsilon(1e-6));
  CHECK(p(2, 1) == Approx(0.095163).epsilon(1e-5));
  CHECK(p(2, 2) == 1.0);
}

TEST_CASE("failure matrix structure against oracle") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int n_sat = std::uniform_int_distribution<int>(1, 60)(gen);
    const int n_nom = std::uniform_int_distribution<int>(1, n_sat)(gen);
    const double lam = std::uniform_real_distribution<double>(1e-5, 0.5)(gen);
    const Eigen::MatrixXd p = build_failure_matrix(n_sat, n_nom, lam);
    const Eigen::MatrixXd ref = oracle::failure_matrix(n_sat, n_nom, lam);
    CHECK((p - ref).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((p.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-13);
    CHECK(p.minCoeff() >= 0.0);
    CHECK(p.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("lead time pmf") {
  PolicyConfig cfg;
  cfg.tau_mc_days = 0.5;
  cfg.mu_lv_days = 1.0;
  cfg.tau_lv_days = 1.0;
  const LeadTimeModel lead = lead_time_pmf(cfg);
  CHECK(lead.alpha == Approx(0.606531).epsilon(1e-6));
  CHECK(lead.m == 2);
  CHECK(lead.pmf(1) == 0.0);
  CHECK(lead.pmf(2) == 0.0);
  CHECK(lead.pmf(3) == Approx(0.393469).epsilon(1e-6));
  CHECK(lead.pmf(4) == Approx(0.238651).epsilon(1e-5));
  CHECK(lead.survival(2) == 1.0);
  CHECK(lead.survival(3) == Approx(lead.alpha));

  const auto seq = lead.pmf_sequence(400);
  double total = 0.0, mean = 0.0;
  for (std::size_t j = 0; j < seq.size(); ++j) {
    total += seq[j];
    mean += (j + 1) * seq[j];
  }
  CHECK(total == Approx(1.0).epsilon(1e-12));
  CHECK(mean == Approx(lead.mean_steps()).epsilon(1e-10));
}

TEST_CASE("fixed delay rounds up off the grid and snaps near it") {
  PolicyConfig cfg;
  cfg.tau_mc_days = 0.5;
  cfg.tau_lv_days = 10.2;
  CHECK(cfg.lead_fixed_steps() == 21);
  CHECK_FALSE(cfg.lead_time_grid_aligned());
  cfg.tau_lv_days = 10.0 * (1.0 + 1e-12);
  CHECK(cfg.lead_fixed_steps() == 20);
  CHECK(cfg.lead_time_grid_aligned());
  cfg.tau_lv_days = 0.0;
  CHECK(cfg.lead_fixed_steps() == 0);
}

TEST_CASE("projections and replenishment") {
  const Projections c = build_projections(5, 2);
  CHECK((c.plus + c.minus - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((c.plus - oracle::keep_above(5, 2)).cwiseAbs().maxCoeff() == 0.0);

  const Eigen::MatrixXd pq = build_replenishment_matrix(5, 3);
  // Only states 0..n_sat-q can receive a delivery; compare those columns.
  CHECK((pq.rightCols(3) - oracle::replenish(5, 3).rightCols(3)).cwiseAbs().maxCoeff() == 0.0);
  // State 2 (index 3) moves to state 5 (index 0).
  CHECK(pq(0, 3) == 1.0);
  CHECK((pq.colwise().sum().array() - 1.0).abs().maxCoeff() == 0.0);
}

TEST_CASE("transition bundle keeps precision at tiny rates") {
  PolicyConfig cfg;
  cfg.q = 2;
  cfg.r = 39;
  cfg.lambda_sat_per_year = 1e-14;
  const TransitionMatrices mats = build_transition_matrices(cfg);
  CHECK(mats.leave_prob[0] > 0.0);
  CHECK(mats.leave_prob[0] == Approx(40 * cfg.lambda_step()).epsilon(1e-12));
  CHECK(mats.leave_prob[cfg.n_sat()] == 0.0);
}

TEST_CASE("state distribution invariants") {
  Eigen::VectorXd v(3);
  v << 0.5, 0.5 + 5e-13, -5e-13;
  const StateDistribution d(v);
  CHECK(d.probs()[2] == 0.0);
  CHECK(d.at_state(2) == 0.5);
  CHECK(d.at_state(7) == 0.0);
  v << 0.5, 0.6, -0.1;
  CHECK_THROWS_AS(StateDistribution{v}, std::invalid_argument);
  v << 0.5, 0.4, 0.0;
  CHECK_THROWS_AS(StateDistribution{v}, std::invalid_argument);
  CHECK(StateDistribution::point_mass(4, 1).at_state(1) == 1.0);
  CHECK(total_variation(StateDistribution::point_mass(4, 1), StateDistribution::point_mass(4, 2)) ==
        1.0);
}
