#include "spareops/policy_analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "spareops/errors.hpp"

namespace spareops {

namespace {

constexpr double kMassTolerance = 1e-9;
constexpr double kFixedPointTolerance = 1e-10;
constexpr double kPowerTolerance = 1e-12;
constexpr long kPowerMaxIterations = 1'000'000;
// An expected inter-order period longer than this many steps is reported as
// divergent rather than returned.
constexpr double kMaxPeriodSteps = 1e15;

void check_size(const StateDistribution& pi, const TransitionMatrices& mats, const char* where) {
  if (pi.n_sat() != mats.n_sat) {
    throw std::invalid_argument(std::string(where) + ": distribution has " +
                                std::to_string(pi.size()) + " states, matrices have " +
                                std::to_string(mats.n_sat + 1));
  }
}

// I - C+ P_f. Lower triangular; the diagonal of the rows kept by C+ is taken
// from leave_prob so that small failure rates do not cancel to zero.
Eigen::MatrixXd io_system(const TransitionMatrices& mats) {
  Eigen::MatrixXd sys = -(mats.c_r_plus * mats.p_f);
  sys.diagonal().array() += 1.0;
  const int above = mats.n_sat - mats.r;
  for (int i = 0; i < above; ++i) {
    const double d = mats.leave_prob[i];
    if (!(d > 0.0)) {
      throw SingularSystemError(
          "inter-order period diverges: state " + std::to_string(mats.n_sat - i) +
          " is never left (failure rate too small for a reorder to trigger)");
    }
    sys(i, i) = d;
  }
  return sys;
}

Eigen::MatrixXd lt_system(const TransitionMatrices& mats, double alpha) {
  Eigen::MatrixXd sys = -alpha * mats.p_f;
  sys.diagonal().array() += 1.0;
  return sys;
}

Eigen::MatrixXd matrix_power(Eigen::MatrixXd base, int exponent) {
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(base.rows(), base.cols());
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

StateDistribution checked_unit_mass(Eigen::VectorXd v, const char* where) {
  const double mass = v.sum();
  if (!std::isfinite(mass) || std::abs(mass - 1.0) > kMassTolerance) {
    throw std::logic_error(std::string(where) + ": mass " + std::to_string(mass) +
                           " deviates from 1");
  }
  return StateDistribution(std::move(v));
}

Eigen::VectorXd clip_and_rescale(Eigen::VectorXd v) {
  v = v.cwiseMax(0.0);
  const double s = v.sum();
  if (s > 0.0) v /= s;
  return v;
}

}  // namespace

StateDistribution reorder_distribution(const StateDistribution& pi_q,
                                       const TransitionMatrices& mats) {
  check_size(pi_q, mats, "reorder_distribution");
  const Eigen::MatrixXd sys = io_system(mats);
  const Eigen::VectorXd visits = sys.triangularView<Eigen::Lower>().solve(pi_q.probs());
  Eigen::VectorXd pi_r = mats.c_r_minus * (mats.p_f * visits);
  return checked_unit_mass(std::move(pi_r), "reorder_distribution");
}

StateDistribution post_delivery_distribution(const StateDistribution& pi_r,
                                             const TransitionMatrices& mats,
                                             const LeadTimeModel& lead) {
  check_size(pi_r, mats, "post_delivery_distribution");
  Eigen::VectorXd v = pi_r.probs();
  for (int i = 0; i < lead.m; ++i) v = mats.p_f * v;
  v = lt_system(mats, lead.alpha).triangularView<Eigen::Lower>().solve(v);
  Eigen::VectorXd pi_q = (1.0 - lead.alpha) * (mats.p_q * v);
  return checked_unit_mass(std::move(pi_q), "post_delivery_distribution");
}

Eigen::MatrixXd composed_cycle_map(const TransitionMatrices& mats, const LeadTimeModel& lead) {
  const auto size = mats.n_sat + 1;
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(size, size);

  const Eigen::MatrixXd io_inv = io_system(mats).triangularView<Eigen::Lower>().solve(identity);
  const Eigen::MatrixXd to_reorder = mats.c_r_minus * mats.p_f * io_inv;

  const Eigen::MatrixXd lt_inv =
      lt_system(mats, lead.alpha).triangularView<Eigen::Lower>().solve(identity);
  const Eigen::MatrixXd to_delivery =
      (1.0 - lead.alpha) * mats.p_q * matrix_power(mats.p_f, lead.m) * lt_inv;

  return to_delivery * to_reorder;
}

StationaryPair stationary_pair(const TransitionMatrices& mats, const LeadTimeModel& lead) {
  const Eigen::MatrixXd g = composed_cycle_map(mats, lead);
  const auto size = g.rows();

  auto residual_of = [&g](const Eigen::VectorXd& x) { return (g * x - x).cwiseAbs().sum(); };

  // (G - I) x = 0 has rank size-1 for a single recurrent class; one of its
  // rows is swapped for the normalisation constraint.
  Eigen::MatrixXd sys = g - Eigen::MatrixXd::Identity(size, size);
  sys.row(size - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
  rhs[size - 1] = 1.0;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
  Eigen::VectorXd x;
  bool power = false;
  double residual = 0.0;
  if (lu.isInvertible()) {
    x = clip_and_rescale(lu.solve(rhs));
    residual = residual_of(x);
  }
  if (x.size() == 0 || !(residual <= kFixedPointTolerance)) {
    power = true;
    x = Eigen::VectorXd::Zero(size);
    x[0] = 1.0;
    long it = 0;
    double step = 1.0;
    while (step > kPowerTolerance && it < kPowerMaxIterations) {
      Eigen::VectorXd next = g * x;
      step = (next - x).cwiseAbs().sum();
      x = std::move(next);
      ++it;
    }
    x = clip_and_rescale(std::move(x));
    residual = residual_of(x);
    if (!(residual <= kFixedPointTolerance)) {
      throw ConvergenceError("stationary_pair: no fixed point within 1e-10 (residual " +
                                 std::to_string(residual) + " after " + std::to_string(it) +
                                 " power iterations)",
                             residual, it);
    }
  }

  StateDistribution pi_q(std::move(x));
  StateDistribution pi_r = reorder_distribution(pi_q, mats);
  return StationaryPair{std::move(pi_q), std::move(pi_r), residual, power};
}

PeriodDistribution io_distribution(const StateDistribution& pi_q, const TransitionMatrices& mats) {
  check_size(pi_q, mats, "io_distribution");
  const Eigen::MatrixXd sys = io_system(mats);
  const Eigen::VectorXd visits = sys.triangularView<Eigen::Lower>().solve(pi_q.probs());
  Eigen::VectorXd weights = mats.c_r_plus * (mats.p_f * visits);
  const double k_io = weights.sum();
  if (!std::isfinite(k_io) || k_io > kMaxPeriodSteps) {
    throw SingularSystemError("inter-order period diverges: expected length " +
                              std::to_string(k_io) + " steps");
  }
  if (k_io <= 0.0) return PeriodDistribution{std::nullopt, 0.0};
  return PeriodDistribution{StateDistribution::normalize(std::move(weights)), k_io};
}

PeriodDistribution lt_distribution(const StateDistribution& pi_r, const TransitionMatrices& mats,
                                   const LeadTimeModel& lead) {
  check_size(pi_r, mats, "lt_distribution");
  // Steps 0..m are certainly inside the lead time.
  Eigen::VectorXd step = pi_r.probs();
  Eigen::VectorXd weights = step;
  for (int i = 1; i <= lead.m; ++i) {
    step = mats.p_f * step;
    weights += step;
  }
  // Step m + j (j >= 1) survives with probability alpha^j.
  Eigen::VectorXd tail = mats.p_f * step;
  tail = lt_system(mats, lead.alpha).triangularView<Eigen::Lower>().solve(tail);
  weights += lead.alpha * tail;

  double k_lt = 0.0;
  auto dist = StateDistribution::normalize(std::move(weights), &k_lt);
  return PeriodDistribution{std::move(dist), k_lt};
}

StateDistribution cycle_distribution(const PeriodDistribution& io, const PeriodDistribution& lt) {
  if (lt.empty() || !(lt.k_steps > 0.0)) {
    throw std::invalid_argument("cycle_distribution: lead-time period must be non-empty");
  }
  if (io.empty() || io.k_steps == 0.0) return *lt.dist;
  if (io.k_steps < 0.0) throw std::invalid_argument("cycle_distribution: negative IO length");
  if (io.dist->size() != lt.dist->size()) {
    throw std::invalid_argument("cycle_distribution: state space mismatch");
  }
  Eigen::VectorXd mix = io.k_steps * io.dist->probs() + lt.k_steps * lt.dist->probs();
  return StateDistribution::normalize(std::move(mix));
}

AnalysisResult analyze(const PolicyConfig& cfg) {
  cfg.validate();
  const TransitionMatrices mats = build_transition_matrices(cfg);
  const LeadTimeModel lead = lead_time_pmf(cfg);

  StationaryPair pair = stationary_pair(mats, lead);
  PeriodDistribution io = io_distribution(pair.pi_q, mats);
  PeriodDistribution lt = lt_distribution(pair.pi_r, mats, lead);
  StateDistribution pi_rc = cycle_distribution(io, lt);

  AnalysisResult out{
      .config = cfg,
      .lead = lead,
      .pi_q = std::move(pair.pi_q),
      .pi_r = std::move(pair.pi_r),
      .pi_io = io.dist,
      .pi_lt = *lt.dist,
      .pi_rc = std::move(pi_rc),
  };
  out.k_io = io.k_steps;
  out.k_lt = lt.k_steps;
  out.tau_io_days = io.k_steps * cfg.tau_mc_days;
  out.tau_lt_days = lt.k_steps * cfg.tau_mc_days;
  out.tau_rc_days = out.tau_io_days + out.tau_lt_days;
  out.stationary_residual = pair.residual;
  return out;
}

}  // namespace spareops
