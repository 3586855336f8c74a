#pragma once

#include <string_view>

#include "spareops/config.hpp"
#include "spareops/policy_analysis.hpp"
#include "spareops/state_distribution.hpp"

namespace spareops {

/// Mean in-plane satellite count, sum_i i * pi(i).
double mean_stock(const StateDistribution& pi);

/// Expected deficit below the nominal count, per plane.
double expected_shortage(const StateDistribution& pi, int n_nominal);

/// Expected number of satellites above the nominal count, per plane.
double expected_spares(const StateDistribution& pi, int n_nominal);

enum class LaunchMode { per_unit, full_contract };

std::string_view to_string(LaunchMode mode);

/// Cost rates in M$/day for the whole constellation.
struct CostBreakdown {
  double c_build_rate = 0.0;
  double c_hold_rate = 0.0;
  double c_launch_rate = 0.0;
  double c_total_rate = 0.0;
  LaunchMode launch_mode = LaunchMode::full_contract;
  double m_total = 0.0;  // kg per order
};

CostBreakdown cost_breakdown(const StateDistribution& pi_rc, double tau_rc_days,
                             const PolicyConfig& cfg);
CostBreakdown cost_breakdown(const AnalysisResult& result, const PolicyConfig& cfg);

struct ConstraintValues {
  double g1 = 0.0;  // S - epsilon
  double g2 = 0.0;  // m_total - m_payload

  bool feasible() const noexcept { return g1 <= 0.0 && g2 <= 0.0; }
};

ConstraintValues constraint_eval(const AnalysisResult& result, const PolicyConfig& cfg);

}  // namespace spareops
