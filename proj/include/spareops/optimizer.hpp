#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spareops/config.hpp"
#include "spareops/errors.hpp"
#include "spareops/metrics.hpp"

namespace spareops {

/// Closed integer interval [lo, hi].
struct IntRange {
  int lo = 0;
  int hi = 0;

  int size() const noexcept { return hi >= lo ? hi - lo + 1 : 0; }
  bool contains(int v) const noexcept { return v >= lo && v <= hi; }
  bool operator==(const IntRange&) const = default;
};

/// Search bounds used when none are given: q in [1, 10], r in [n - 5, n + 5]
/// around the nominal count n (clamped at zero).
IntRange default_q_range();
IntRange default_r_range(int n_nominal);

struct GridRecord {
  int q = 0;
  int r = 0;
  CostBreakdown costs;
  double shortage = 0.0;
  ConstraintValues constraints;
  double tau_rc_days = 0.0;

  bool feasible() const noexcept { return constraints.feasible(); }
};

struct OptimizationResult {
  GridRecord best;
  std::vector<GridRecord> grid;  // sorted by (q, r)
  IntRange q_range;
  IntRange r_range;
};

/// No grid point satisfies both constraints. `diagnostic()` is the point
/// with the smallest shortage.
class InfeasibleDesignError : public Error {
 public:
  InfeasibleDesignError(const std::string& message, GridRecord diagnostic)
      : Error(message), diagnostic_(diagnostic) {}

  const GridRecord& diagnostic() const noexcept { return diagnostic_; }

 private:
  GridRecord diagnostic_;
};

GridRecord evaluate_design(const PolicyConfig& cfg);

/// Every (q, r) in the box, in (q, r) order. `threads` = 0 picks the hardware
/// concurrency; the output does not depend on it.
std::vector<GridRecord> evaluate_grid(const PolicyConfig& cfg_template, IntRange q_range,
                                      IntRange r_range, unsigned threads = 0);

/// Picks the optimum from an evaluated grid; throws InfeasibleDesignError when
/// no record is feasible.
OptimizationResult select_optimum(std::vector<GridRecord> grid, IntRange q_range,
                                  IntRange r_range);

/// Exhaustive minimisation of the total cost rate subject to S <= epsilon
/// and m_sat q <= m_payload. Ties go to the smaller q, then the smaller r.
OptimizationResult optimize(const PolicyConfig& cfg_template, IntRange q_range, IntRange r_range,
                            unsigned threads = 0);

struct SweepPoint {
  double lambda_sat_per_year = 0.0;
  std::optional<OptimizationResult> result;
  std::string error;  // set when `result` is empty
};

/// One optimisation per failure rate. Failures at a rate are recorded in
/// that point and do not stop the sweep.
std::vector<SweepPoint> sweep_failure_rate(const PolicyConfig& cfg_template,
                                           std::span<const double> lambdas, IntRange q_range,
                                           IntRange r_range, unsigned threads = 0);

}  // namespace spareops
