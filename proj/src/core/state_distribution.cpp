#include "spareops/state_distribution.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spareops {

StateDistribution::StateDistribution(Eigen::VectorXd probs) : probs_(std::move(probs)) {
  if (probs_.size() == 0) throw std::invalid_argument("StateDistribution: empty vector");
  for (Eigen::Index i = 0; i < probs_.size(); ++i) {
    const double p = probs_[i];
    if (!std::isfinite(p) || p < -kNegativeTolerance) {
      throw std::invalid_argument("StateDistribution: invalid probability " + std::to_string(p) +
                                  " at index " + std::to_string(i));
    }
    if (p < 0.0) probs_[i] = 0.0;
  }
  const double sum = probs_.sum();
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw std::invalid_argument("StateDistribution: total mass " + std::to_string(sum) +
                                " is not 1");
  }
}

StateDistribution StateDistribution::normalize(Eigen::VectorXd weights, double* mass) {
  const double total = weights.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::invalid_argument("StateDistribution::normalize: non-positive total weight");
  }
  if (mass != nullptr) *mass = total;
  weights /= total;
  return StateDistribution(std::move(weights));
}

StateDistribution StateDistribution::point_mass(int n_sat, int state) {
  if (n_sat < 0 || state < 0 || state > n_sat) {
    throw std::invalid_argument("StateDistribution::point_mass: state out of range");
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n_sat + 1);
  v[index_of(n_sat, state)] = 1.0;
  return StateDistribution(std::move(v));
}

double StateDistribution::at_state(int state) const noexcept {
  if (state < 0 || state > n_sat()) return 0.0;
  return probs_[index_of(n_sat(), state)];
}

double l1_distance(const StateDistribution& a, const StateDistribution& b) {
  if (a.size() != b.size()) throw std::invalid_argument("l1_distance: size mismatch");
  return (a.probs() - b.probs()).cwiseAbs().sum();
}

double total_variation(const StateDistribution& a, const StateDistribution& b) {
  return 0.5 * l1_distance(a, b);
}

}  // namespace spareops
