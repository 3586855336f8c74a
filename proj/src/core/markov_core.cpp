#include "spareops/markov_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spareops {

double failure_pmf(int n, int k, double lambda_step, int n_nominal) {
  if (n < 0 || k < 0) throw std::invalid_argument("failure_pmf: negative state or count");
  if (!(lambda_step > 0.0)) throw std::invalid_argument("failure_pmf: rate must be > 0");
  if (n_nominal < 1) throw std::invalid_argument("failure_pmf: nominal count must be >= 1");

  if (k > n_nominal) return 0.0;
  const double mean = std::min(n, n_nominal) * lambda_step;
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
}

Eigen::MatrixXd build_failure_matrix(int n_sat, int n_nominal, double lambda_step) {
  if (n_sat < 0) throw std::invalid_argument("build_failure_matrix: negative state count");
  const int size = n_sat + 1;
  Eigen::MatrixXd p_f = Eigen::MatrixXd::Zero(size, size);
  for (int col = 0; col < size; ++col) {
    const int from = n_sat - col;
    double kept = 0.0;
    for (int k = 0; k < from; ++k) {
      const double nu = failure_pmf(from, k, lambda_step, n_nominal);
      p_f(col + k, col) = nu;
      kept += nu;
    }
    if (from == 0) {
      p_f(n_sat, col) = 1.0;
    } else {
      p_f(n_sat, col) = std::max(0.0, 1.0 - kept);
    }
  }
  return p_f;
}

Eigen::MatrixXd build_failure_matrix(const PolicyConfig& cfg) {
  cfg.validate();
  return build_failure_matrix(cfg.n_sat(), cfg.n_sat_nominal, cfg.lambda_step());
}

double LeadTimeModel::pmf(int step) const {
  if (step < 1) throw std::invalid_argument("LeadTimeModel::pmf: step must be >= 1");
  const int k = step - 1;
  if (k < m) return 0.0;
  return std::pow(alpha, k - m) * (1.0 - alpha);
}

double LeadTimeModel::survival(int step) const {
  if (step < 0) throw std::invalid_argument("LeadTimeModel::survival: negative step");
  if (step <= m) return 1.0;
  return std::pow(alpha, step - m);
}

std::vector<double> LeadTimeModel::pmf_sequence(int count) const {
  std::vector<double> rho;
  rho.reserve(std::max(count, 0));
  for (int j = 1; j <= count; ++j) rho.push_back(pmf(j));
  return rho;
}

LeadTimeModel lead_time_pmf(const PolicyConfig& cfg) {
  cfg.validate();
  return LeadTimeModel{cfg.lead_alpha(), cfg.lead_fixed_steps()};
}

Projections build_projections(int n_sat, int r) {
  if (r < 0 || r > n_sat) throw std::invalid_argument("build_projections: need 0 <= r <= n_sat");
  const int size = n_sat + 1;
  const int above = n_sat - r;  // states r+1 .. n_sat occupy the first indices
  Eigen::VectorXd keep_plus = Eigen::VectorXd::Zero(size);
  keep_plus.head(above).setOnes();
  Eigen::VectorXd keep_minus = Eigen::VectorXd::Ones(size) - keep_plus;
  return Projections{keep_plus.asDiagonal(), keep_minus.asDiagonal()};
}

Eigen::MatrixXd build_replenishment_matrix(int n_sat, int q) {
  if (q < 1 || q > n_sat) {
    throw std::invalid_argument("build_replenishment_matrix: need 1 <= q <= n_sat");
  }
  const int size = n_sat + 1;
  Eigen::MatrixXd p_q = Eigen::MatrixXd::Zero(size, size);
  for (int col = 0; col < size; ++col) {
    p_q(col >= q ? col - q : col, col) = 1.0;
  }
  return p_q;
}

TransitionMatrices build_transition_matrices(const PolicyConfig& cfg) {
  cfg.validate();
  const int n_sat = cfg.n_sat();
  TransitionMatrices mats;
  mats.n_sat = n_sat;
  mats.q = cfg.q;
  mats.r = cfg.r;
  mats.p_f = build_failure_matrix(n_sat, cfg.n_sat_nominal, cfg.lambda_step());
  mats.p_q = build_replenishment_matrix(n_sat, cfg.q);
  auto proj = build_projections(n_sat, cfg.r);
  mats.c_r_plus = std::move(proj.plus);
  mats.c_r_minus = std::move(proj.minus);

  mats.leave_prob.resize(n_sat + 1);
  for (int i = 0; i <= n_sat; ++i) {
    const int state = n_sat - i;
    const double mean = std::min(state, cfg.n_sat_nominal) * cfg.lambda_step();
    mats.leave_prob[i] = state == 0 ? 0.0 : -std::expm1(-mean);
  }
  return mats;
}

}  // namespace spareops
