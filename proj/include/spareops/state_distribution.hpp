#pragma once

#include <Eigen/Dense>

namespace spareops {

/// Probability vector over the in-plane states 0..n_sat.
///
/// Storage is in descending state order: index 0 holds P(X = n_sat) and
/// index n_sat holds P(X = 0). Use `at_state` / `index_of` rather than raw
/// indices when the state label matters.
class StateDistribution {
 public:
  static constexpr double kNegativeTolerance = 1e-12;
  static constexpr double kSumTolerance = 1e-9;

  /// Entries in [-1e-12, 0) are clipped to zero; anything more negative, or a
  /// total further than 1e-9 from one, throws std::invalid_argument.
  explicit StateDistribution(Eigen::VectorXd probs);

  /// Rescales a non-negative weight vector to unit mass. `mass` receives the
  /// original total when non-null. Throws if the total is not positive.
  static StateDistribution normalize(Eigen::VectorXd weights, double* mass = nullptr);

  static StateDistribution point_mass(int n_sat, int state);

  static constexpr int index_of(int n_sat, int state) noexcept { return n_sat - state; }
  static constexpr int state_of(int n_sat, int index) noexcept { return n_sat - index; }

  int n_sat() const noexcept { return static_cast<int>(probs_.size()) - 1; }
  int size() const noexcept { return static_cast<int>(probs_.size()); }

  /// P(X = state); zero for states outside 0..n_sat.
  double at_state(int state) const noexcept;

  const Eigen::VectorXd& probs() const noexcept { return probs_; }

  double total() const noexcept { return probs_.sum(); }

  bool operator==(const StateDistribution& other) const { return probs_ == other.probs_; }

 private:
  Eigen::VectorXd probs_;
};

/// L1 distance between two distributions over the same state space.
double l1_distance(const StateDistribution& a, const StateDistribution& b);

/// Total-variation distance, half the L1 distance.
double total_variation(const StateDistribution& a, const StateDistribution& b);

}  // namespace spareops
