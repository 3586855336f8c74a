#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spareops/config.hpp"
#include "spareops/optimizer.hpp"
#include "spareops/policy_analysis.hpp"
#include "spareops/state_distribution.hpp"

namespace spareops {

struct SimStats {
  StateDistribution histogram;        // time in state after delivery and failure
  std::vector<std::uint64_t> counts;  // raw counts, descending state order
  double m_sim = 0.0;
  double s_sim = 0.0;
  int n_reps = 0;
  double horizon_days = 0.0;
  std::uint64_t seed = 0;
  long burn_in_steps = 0;
  long horizon_steps = 0;
  std::optional<double> rel_err_m;
  std::optional<double> rel_err_s;
};

/// Floor applied to the analytic shortage when forming its relative error.
inline constexpr double kShortageFloor = 1e-6;

/// Simulates one plane under the (r, q) policy: `n_reps` independent
/// replications of `horizon_days` each, recorded after burn_in_steps() of
/// warm-up. A replication starts with no order outstanding in a state drawn
/// uniformly from r+1 .. q+r. Replication i draws from its own stream seeded
/// by (seed, i), so results do not depend on `threads`.
SimStats simulate(const PolicyConfig& cfg, double horizon_days, int n_reps, std::uint64_t seed,
                  unsigned threads = 0);

/// Warm-up discarded before recording: max(10 k_lt, one year, 8 / lambda_step)
/// steps, the last term capped at ten horizons.
long burn_in_steps(const PolicyConfig& cfg, long horizon_steps);

/// simulate() plus relative errors of M and S against `analytic`, which must
/// have been produced from `cfg` (MismatchError otherwise).
SimStats validate(const PolicyConfig& cfg, const AnalysisResult& analytic, double horizon_days,
                  int n_reps, std::uint64_t seed, unsigned threads = 0);

/// Sampling box for the validation suite. Integer bounds are inclusive.
struct ParameterBox {
  double lambda_lo = 0.001, lambda_hi = 0.5;  // failures / satellite / year
  double tau_lv_lo = 0.0, tau_lv_hi = 60.0;   // days
  double mu_lv_lo = 5.0, mu_lv_hi = 60.0;     // days
  IntRange q{1, 10};
  IntRange r{35, 45};

  /// The default sampling box, with r centred on `n_nominal`.
  static ParameterBox standard(int n_nominal);
};

/// Latin hypercube over (lambda, tau_lv, mu_lv, q, r): each dimension is cut
/// into n strata and every stratum is hit exactly once. tau_lv is rounded to
/// the nearest multiple of the base config's tau_mc (kept inside the box).
std::vector<PolicyConfig> latin_hypercube(const PolicyConfig& base, const ParameterBox& box,
                                          int n_cases, std::uint64_t seed);

/// Seed used for suite case `case_id`.
std::uint64_t case_seed(std::uint64_t root_seed, int case_id);

struct ValidationRow {
  int case_id = 0;
  PolicyConfig config;
  double m_analytic = 0.0;
  double s_analytic = 0.0;
  std::optional<SimStats> sim;
  std::string error;  // non-empty for a failed case
};

struct ValidationSummary {
  std::vector<ValidationRow> rows;
  double mean_rel_err_m = 0.0;
  double p95_rel_err_m = 0.0;
  double mean_rel_err_s = 0.0;
  double p95_rel_err_s = 0.0;
  int failed_cases = 0;
};

/// Mean and P95 (nearest rank) of the relative errors over the successful rows.
ValidationSummary summarize_validation(std::vector<ValidationRow> rows);

/// analyze() and validate() for one case; errors are caught into the row.
ValidationRow validate_case(int case_id, const PolicyConfig& cfg, double horizon_days,
                            int n_reps, std::uint64_t seed, unsigned threads = 0);

ValidationSummary lhs_validation_suite(const PolicyConfig& base, const ParameterBox& box,
                                       int n_cases, double horizon_days, int n_reps,
                                       std::uint64_t seed, unsigned threads = 0);

}  // namespace spareops
