#pragma once

#include <vector>

#include <Eigen/Dense>

#include "spareops/config.hpp"

namespace spareops {

/// Probability of k failures in one step for a plane holding n satellites.
/// Only min(n, n_nominal) satellites are operational and can fail; counts
/// above n_nominal have probability zero. Throws std::invalid_argument on
/// negative n or k, non-positive rate, or n_nominal < 1.
double failure_pmf(int n, int k, double lambda_step, int n_nominal);

/// Column-stochastic failure matrix over states n_sat..0 (descending).
/// Column j starts in state n_sat - j; mass that would fall below state 1 is
/// collected in the last row (state 0). Lower triangular.
Eigen::MatrixXd build_failure_matrix(int n_sat, int n_nominal, double lambda_step);
Eigen::MatrixXd build_failure_matrix(const PolicyConfig& cfg);

/// Discretized shifted-exponential lead time.
///
/// A delivery lands on step j (counted from the reorder step 0) with
/// probability pmf(j) = alpha^(j-1-m) (1 - alpha) for j > m and zero otherwise.
struct LeadTimeModel {
  double alpha = 0.0;  // exp(-tau_mc / mu_lv)
  int m = 0;           // ceil(tau_lv / tau_mc)

  /// rho_j, j >= 1.
  double pmf(int step) const;

  /// Probability the delivery has not arrived by step j (rho^c_j, j >= 0).
  double survival(int step) const;

  /// Expected lead-time length in steps: (m + 1) + alpha / (1 - alpha).
  double mean_steps() const { return (m + 1) + alpha / (1.0 - alpha); }

  /// rho_1 .. rho_count.
  std::vector<double> pmf_sequence(int count) const;
};

LeadTimeModel lead_time_pmf(const PolicyConfig& cfg);

struct Projections {
  Eigen::MatrixXd plus;   // keeps states > r
  Eigen::MatrixXd minus;  // keeps states <= r
};

Projections build_projections(int n_sat, int r);

/// 0/1 column-stochastic matrix adding q satellites: descending index i >= q
/// moves to i - q, indices below q are left in place.
Eigen::MatrixXd build_replenishment_matrix(int n_sat, int q);

struct TransitionMatrices {
  int n_sat = 0;
  int q = 0;
  int r = 0;
  Eigen::MatrixXd p_f;
  Eigen::MatrixXd p_q;
  Eigen::MatrixXd c_r_plus;
  Eigen::MatrixXd c_r_minus;
  /// 1 - P_f(i, i) per index, evaluated with expm1 so tiny rates keep precision.
  Eigen::VectorXd leave_prob;
};

TransitionMatrices build_transition_matrices(const PolicyConfig& cfg);

}  // namespace spareops
