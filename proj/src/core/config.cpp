#include "spareops/config.hpp"

#include <algorithm>
#include <cmath>

#include "spareops/errors.hpp"

namespace spareops {

namespace {

constexpr double kGridSnap = 1e-9;

double lead_ratio(const PolicyConfig& cfg) { return cfg.tau_lv_days / cfg.tau_mc_days; }

void require(bool ok, const char* key, const char* message) {
  if (!ok) throw ConfigError(key, message);
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

double PolicyConfig::lead_alpha() const { return std::exp(-tau_mc_days / mu_lv_days); }

int PolicyConfig::lead_fixed_steps() const {
  const double ratio = lead_ratio(*this);
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= kGridSnap * std::max(1.0, ratio)) {
    return static_cast<int>(nearest);
  }
  return static_cast<int>(std::ceil(ratio));
}

bool PolicyConfig::lead_time_grid_aligned() const {
  const double ratio = lead_ratio(*this);
  return std::abs(ratio - std::round(ratio)) <= kGridSnap * std::max(1.0, ratio);
}

void PolicyConfig::validate() const {
  require(q >= 1, "q", "must be >= 1");
  require(r >= 0, "r", "must be >= 0");
  require(n_sat_nominal >= 1, "n_sat_nominal", "must be >= 1");
  require(n_orbit >= 1, "n_orbit", "must be >= 1");
  require(positive_finite(lambda_sat_per_year), "lambda_sat_per_year", "must be > 0");
  require(positive_finite(tau_mc_days), "tau_mc_days", "must be > 0");
  require(positive_finite(mu_lv_days), "mu_lv_days", "must be > 0");
  require(std::isfinite(tau_lv_days) && tau_lv_days >= 0.0, "tau_lv_days", "must be >= 0");
  require(positive_finite(days_per_year), "days_per_year", "must be > 0");
  require(positive_finite(c_build), "c_build", "must be > 0");
  require(positive_finite(c_hold_per_year), "c_hold_per_year", "must be > 0");
  require(positive_finite(c_lv_unit), "c_lv_unit", "must be > 0");
  require(positive_finite(c_lv_full), "c_lv_full", "must be > 0");
  require(positive_finite(m_sat), "m_sat", "must be > 0");
  require(positive_finite(m_payload), "m_payload", "must be > 0");
  require(std::isfinite(epsilon) && epsilon >= 0.0, "epsilon", "must be >= 0");
  // Keeps the matrices and the simulator's step counter in a sane range.
  require(n_sat() <= 100000, "q", "q + r exceeds 100000 states");
  require(lead_ratio(*this) <= 1e7, "tau_lv_days", "more than 1e7 Markov steps of fixed delay");
}

}  // namespace spareops
