#include "spareops/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace spareops {

double mean_stock(const StateDistribution& pi) {
  double m = 0.0;
  for (int s = 0; s <= pi.n_sat(); ++s) m += s * pi.at_state(s);
  return m;
}

double expected_shortage(const StateDistribution& pi, int n_nominal) {
  double total = 0.0;
  for (int s = 0; s <= std::min(n_nominal, pi.n_sat()); ++s) {
    total += (n_nominal - s) * pi.at_state(s);
  }
  return total;
}

double expected_spares(const StateDistribution& pi, int n_nominal) {
  double total = 0.0;
  for (int s = n_nominal + 1; s <= pi.n_sat(); ++s) total += (s - n_nominal) * pi.at_state(s);
  return total;
}

std::string_view to_string(LaunchMode mode) {
  switch (mode) {
    case LaunchMode::per_unit:
      return "per_unit";
    case LaunchMode::full_contract:
      return "full_contract";
  }
  return "unknown";
}

CostBreakdown cost_breakdown(const StateDistribution& pi_rc, double tau_rc_days,
                             const PolicyConfig& cfg) {
  if (!(tau_rc_days > 0.0)) throw std::invalid_argument("cost_breakdown: tau_rc must be > 0");
  CostBreakdown c;
  const double cycles_per_day = cfg.n_orbit / tau_rc_days;

  c.c_build_rate = cfg.c_build * cfg.q * cycles_per_day;

  const double hold_per_day = cfg.c_hold_per_year / cfg.days_per_year;
  c.c_hold_rate = hold_per_day * cfg.n_orbit * expected_spares(pi_rc, cfg.n_sat_nominal);

  c.m_total = cfg.m_sat * cfg.q;
  const double per_unit_price = cfg.c_lv_unit * c.m_total;
  if (cfg.rideshare_available && per_unit_price < cfg.c_lv_full) {
    c.launch_mode = LaunchMode::per_unit;
    c.c_launch_rate = cycles_per_day * per_unit_price;
  } else {
    c.launch_mode = LaunchMode::full_contract;
    c.c_launch_rate = cycles_per_day * cfg.c_lv_full;
  }

  c.c_total_rate = c.c_build_rate + c.c_hold_rate + c.c_launch_rate;
  return c;
}

CostBreakdown cost_breakdown(const AnalysisResult& result, const PolicyConfig& cfg) {
  return cost_breakdown(result.pi_rc, result.tau_rc_days, cfg);
}

ConstraintValues constraint_eval(const AnalysisResult& result, const PolicyConfig& cfg) {
  return ConstraintValues{
      .g1 = expected_shortage(result.pi_rc, cfg.n_sat_nominal) - cfg.epsilon,
      .g2 = cfg.m_sat * cfg.q - cfg.m_payload,
  };
}

}  // namespace spareops
