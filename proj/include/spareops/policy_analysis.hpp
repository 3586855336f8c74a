#pragma once

#include <optional>

#include <Eigen/Dense>

#include "spareops/config.hpp"
#include "spareops/markov_core.hpp"
#include "spareops/state_distribution.hpp"

namespace spareops {

/// Distribution at the reorder instant given the distribution just after a
/// delivery: C- P_f (I - C+ P_f)^-1 pi_q. The result carries unit mass
/// without renormalization; std::logic_error is thrown if it does not.
StateDistribution reorder_distribution(const StateDistribution& pi_q,
                                       const TransitionMatrices& mats);

/// Distribution just after the delivery that answers a reorder made in
/// pi_r: (1 - alpha) P_q P_f^m (I - alpha P_f)^-1 pi_r.
StateDistribution post_delivery_distribution(const StateDistribution& pi_r,
                                             const TransitionMatrices& mats,
                                             const LeadTimeModel& lead);

/// Matrix of the delivery -> reorder -> delivery map. Column-stochastic.
Eigen::MatrixXd composed_cycle_map(const TransitionMatrices& mats, const LeadTimeModel& lead);

struct StationaryPair {
  StateDistribution pi_q;
  StateDistribution pi_r;
  double residual = 0.0;  // ||G pi_q - pi_q||_1
  bool power_iteration = false;
};

/// Fixed point of the composed cycle map. Solved directly; falls back to
/// power iteration when the direct solution misses the 1e-10 residual.
/// Throws ConvergenceError if neither route reaches it.
StationaryPair stationary_pair(const TransitionMatrices& mats, const LeadTimeModel& lead);

/// Time-average over one period together with its expected length in steps.
/// `dist` is empty only for a zero-length period.
struct PeriodDistribution {
  std::optional<StateDistribution> dist;
  double k_steps = 0.0;

  bool empty() const noexcept { return !dist.has_value(); }
};

/// Inter-order period, from the step of a delivery up to (excluding) the
/// reorder step. Throws SingularSystemError when the period diverges.
PeriodDistribution io_distribution(const StateDistribution& pi_q, const TransitionMatrices& mats);

/// Lead-time period, from the reorder step up to (excluding) the delivery step.
PeriodDistribution lt_distribution(const StateDistribution& pi_r,
                                   const TransitionMatrices& mats,
                                   const LeadTimeModel& lead);

StateDistribution cycle_distribution(const PeriodDistribution& io, const PeriodDistribution& lt);

struct AnalysisResult {
  PolicyConfig config;
  LeadTimeModel lead;

  StateDistribution pi_q;
  StateDistribution pi_r;
  std::optional<StateDistribution> pi_io;  // empty when the IO period has zero length
  StateDistribution pi_lt;
  StateDistribution pi_rc;

  double k_io = 0.0;
  double k_lt = 0.0;
  double tau_io_days = 0.0;
  double tau_lt_days = 0.0;
  double tau_rc_days = 0.0;

  double stationary_residual = 0.0;
};

/// Full evaluation of one (r, q) policy. Deterministic in its input.
AnalysisResult analyze(const PolicyConfig& cfg);

}  // namespace spareops
