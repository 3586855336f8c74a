#pragma once

namespace spareops {

/// Scalar model parameters for one (r, q) policy on one constellation.
///
/// Money is in M$ throughout (c_lv_unit is M$/kg, so 30000 $/kg is 0.03).
/// Time is in days unless the field name says otherwise.
struct PolicyConfig {
  int q = 1;               // order size, satellites
  int r = 0;               // reorder point, satellites
  int n_sat_nominal = 40;  // operational satellites per plane
  int n_orbit = 40;        // number of planes

  double lambda_sat_per_year = 0.05;  // failures / satellite / year
  double tau_mc_days = 0.5;           // Markov step
  double mu_lv_days = 10.0;           // mean of the exponential lead-time part
  double tau_lv_days = 10.0;          // fixed order-processing delay
  double days_per_year = 365.25;

  double c_build = 0.5;           // M$ / satellite
  double c_hold_per_year = 0.25;  // M$ / satellite / year
  double c_lv_unit = 0.03;        // M$ / kg
  double c_lv_full = 7.5;         // M$ / launch
  double m_sat = 150.0;           // kg
  double m_payload = 300.0;       // kg
  bool rideshare_available = true;

  double epsilon = 0.25;  // per-plane shortage threshold

  /// Highest reachable in-plane state, q + r.
  int n_sat() const noexcept { return q + r; }

  /// Failure rate per satellite per Markov step.
  double lambda_step() const noexcept {
    return lambda_sat_per_year * tau_mc_days / days_per_year;
  }

  /// Per-step survival factor of the exponential lead-time component.
  double lead_alpha() const;

  /// Whole steps needed to cover the fixed processing delay, ceil(tau_lv / tau_mc).
  /// Ratios within 1e-9 of an integer are snapped to it.
  int lead_fixed_steps() const;

  /// False when tau_lv is not an integer multiple of tau_mc; the discrete
  /// lead-time model then rounds the fixed delay up to the next step.
  bool lead_time_grid_aligned() const;

  /// Throws ConfigError naming the first field that violates its domain.
  void validate() const;

  bool operator==(const PolicyConfig&) const = default;
};

}  // namespace spareops
