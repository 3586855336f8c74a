#include "spareops/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "spareops/errors.hpp"
#include "spareops/metrics.hpp"

namespace spareops {

namespace {

// Uniform on [0, 1) from the top 53 bits. Written out rather than using
// std::uniform_real_distribution so streams are identical across standard
// library implementations.
double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// Inversion sampling; the per-step means are tiny so this rarely loops.
int draw_poisson(double mean, double p0, std::mt19937_64& gen) {
  const double u = uniform01(gen);
  int k = 0;
  double p = p0;
  double cdf = p0;
  while (u >= cdf && p > 0.0) {
    ++k;
    p *= mean / k;
    cdf += p;
  }
  return k;
}

struct PlaneModel {
  int n_sat;
  int q;
  int r;
  int n_nominal;
  double tau_mc;
  double tau_lv;
  double mu_lv;
  std::vector<double> mean;  // by state
  std::vector<double> p0;    // exp(-mean) by state
};

PlaneModel make_plane(const PolicyConfig& cfg) {
  PlaneModel pm{cfg.n_sat(),       cfg.q,           cfg.r,           cfg.n_sat_nominal,
                cfg.tau_mc_days, cfg.tau_lv_days, cfg.mu_lv_days, {},              {}};
  pm.mean.resize(pm.n_sat + 1);
  pm.p0.resize(pm.n_sat + 1);
  for (int s = 0; s <= pm.n_sat; ++s) {
    pm.mean[s] = std::min(s, cfg.n_sat_nominal) * cfg.lambda_step();
    pm.p0[s] = std::exp(-pm.mean[s]);
  }
  return pm;
}

// One replication. Step order: delivery, failure, record, reorder review.
std::vector<std::uint64_t> run_replication(const PlaneModel& pm, long burn_in, long horizon,
                                           std::mt19937_64 gen) {
  std::vector<std::uint64_t> counts(pm.n_sat + 1, 0);
  // Start at a uniformly drawn point of the inter-order range r+1 .. q+r.
  int x = pm.r + 1 + std::min(pm.q - 1, static_cast<int>(uniform01(gen) * pm.q));
  bool pending = false;
  long arrival = 0;
  const long total = burn_in + horizon;
  for (long t = 0; t < total; ++t) {
    if (pending && t >= arrival) {
      x += pm.q;
      pending = false;
    }
    const int failures = draw_poisson(pm.mean[x], pm.p0[x], gen);
    // More failures than operational satellites cannot be represented in the
    // chain; like its bottom row, they empty the plane.
    x = failures > pm.n_nominal ? 0 : std::max(x - failures, 0);
    if (t >= burn_in) ++counts[pm.n_sat - x];
    if (!pending && x <= pm.r) {
      const double lead = pm.tau_lv - pm.mu_lv * std::log1p(-uniform01(gen));
      // Lands on the first step whose elapsed time exceeds the lead time.
      arrival = t + static_cast<long>(std::floor(lead / pm.tau_mc)) + 1;
      pending = true;
    }
  }
  return counts;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

long burn_in_steps(const PolicyConfig& cfg, long horizon_steps) {
  const LeadTimeModel lead{cfg.lead_alpha(), cfg.lead_fixed_steps()};
  const long floor_steps =
      std::max(static_cast<long>(std::ceil(10.0 * lead.mean_steps())),
               static_cast<long>(std::ceil(cfg.days_per_year / cfg.tau_mc_days)));
  // An under-supplied plane relaxes with the satellite lifetime as time
  // constant; eight lifetimes shrink an initial excess of q + r by e^-8.
  const double relax = 8.0 / cfg.lambda_step();
  const double cap = 10.0 * static_cast<double>(horizon_steps);
  return std::max(floor_steps, static_cast<long>(std::ceil(std::min(relax, cap))));
}

SimStats simulate(const PolicyConfig& cfg, double horizon_days, int n_reps, std::uint64_t seed,
                  unsigned threads) {
  cfg.validate();
  if (!(horizon_days >= 100.0 * cfg.tau_mc_days) || !std::isfinite(horizon_days)) {
    throw std::invalid_argument("simulate: horizon must cover at least 100 Markov steps");
  }
  if (n_reps < 1) throw std::invalid_argument("simulate: n_reps must be >= 1");

  const PlaneModel pm = make_plane(cfg);
  const long horizon = std::lround(horizon_days / cfg.tau_mc_days);
  const long burn_in = burn_in_steps(cfg, horizon);

  std::vector<std::vector<std::uint64_t>> per_rep(n_reps);
  std::vector<std::exception_ptr> errors(n_reps);
  auto work = [&](int rep) {
    try {
      per_rep[rep] = run_replication(pm, burn_in, horizon, stream_for(seed, rep));
    } catch (...) {
      errors[rep] = std::current_exception();
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, static_cast<unsigned>(n_reps));
  if (threads <= 1) {
    for (int rep = 0; rep < n_reps; ++rep) work(rep);
  } else {
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (int rep = next++; rep < n_reps; rep = next++) work(rep);
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<std::uint64_t> counts(pm.n_sat + 1, 0);
  for (const auto& rep : per_rep) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += rep[i];
  }
  const double total = static_cast<double>(
      std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
  Eigen::VectorXd probs(pm.n_sat + 1);
  for (std::size_t i = 0; i < counts.size(); ++i) probs[i] = counts[i] / total;

  StateDistribution hist = StateDistribution::normalize(std::move(probs));
  const double m_sim = mean_stock(hist);
  const double s_sim = expected_shortage(hist, cfg.n_sat_nominal);
  return SimStats{.histogram = std::move(hist),
                  .counts = std::move(counts),
                  .m_sim = m_sim,
                  .s_sim = s_sim,
                  .n_reps = n_reps,
                  .horizon_days = horizon_days,
                  .seed = seed,
                  .burn_in_steps = burn_in,
                  .horizon_steps = horizon,
                  .rel_err_m = std::nullopt,
                  .rel_err_s = std::nullopt};
}

SimStats validate(const PolicyConfig& cfg, const AnalysisResult& analytic, double horizon_days,
                  int n_reps, std::uint64_t seed, unsigned threads) {
  if (!(analytic.config == cfg)) {
    throw MismatchError("validate: analytic result was computed from a different config");
  }
  SimStats stats = simulate(cfg, horizon_days, n_reps, seed, threads);
  const double m = mean_stock(analytic.pi_rc);
  const double s = expected_shortage(analytic.pi_rc, cfg.n_sat_nominal);
  stats.rel_err_m = std::abs(stats.m_sim - m) / std::max(m, kShortageFloor);
  stats.rel_err_s = std::abs(stats.s_sim - s) / std::max(s, kShortageFloor);
  return stats;
}

ParameterBox ParameterBox::standard(int n_nominal) {
  ParameterBox box;
  box.r = IntRange{std::max(0, n_nominal - 5), n_nominal + 5};
  return box;
}

std::vector<PolicyConfig> latin_hypercube(const PolicyConfig& base, const ParameterBox& box,
                                          int n_cases, std::uint64_t seed) {
  if (n_cases < 1) throw std::invalid_argument("latin_hypercube: n_cases must be >= 1");
  if (box.q.size() == 0 || box.r.size() == 0 || box.q.lo < 1 || box.r.lo < 0 ||
      !(box.lambda_lo > 0.0) || box.lambda_hi < box.lambda_lo || box.tau_lv_lo < 0.0 ||
      box.tau_lv_hi < box.tau_lv_lo || !(box.mu_lv_lo > 0.0) || box.mu_lv_hi < box.mu_lv_lo) {
    throw std::invalid_argument("latin_hypercube: invalid parameter box");
  }

  constexpr int kDims = 5;
  std::mt19937_64 gen = stream_for(seed, 0xC0FFEEULL);
  // unit[d][i]: position of case i along dimension d, in [0, 1).
  std::vector<std::vector<double>> unit(kDims, std::vector<double>(n_cases));
  for (auto& column : unit) {
    std::vector<int> perm(n_cases);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n_cases - 1; i > 0; --i) {
      const int j = static_cast<int>(uniform01(gen) * (i + 1));
      std::swap(perm[i], perm[std::min(j, i)]);
    }
    for (int i = 0; i < n_cases; ++i) column[i] = (perm[i] + uniform01(gen)) / n_cases;
  }

  auto real_at = [](double lo, double hi, double u) { return lo + u * (hi - lo); };
  auto int_at = [](IntRange range, double u) {
    return std::min(range.hi, range.lo + static_cast<int>(std::floor(u * range.size())));
  };

  std::vector<PolicyConfig> cases;
  cases.reserve(n_cases);
  for (int i = 0; i < n_cases; ++i) {
    PolicyConfig cfg = base;
    cfg.lambda_sat_per_year = real_at(box.lambda_lo, box.lambda_hi, unit[0][i]);
    // The discrete lead-time model is exact only for whole-step delays.
    const double tau_lv = real_at(box.tau_lv_lo, box.tau_lv_hi, unit[1][i]);
    cfg.tau_lv_days = std::clamp(std::round(tau_lv / base.tau_mc_days) * base.tau_mc_days,
                                 box.tau_lv_lo, box.tau_lv_hi);
    cfg.mu_lv_days = real_at(box.mu_lv_lo, box.mu_lv_hi, unit[2][i]);
    cfg.q = int_at(box.q, unit[3][i]);
    cfg.r = int_at(box.r, unit[4][i]);
    cases.push_back(cfg);
  }
  return cases;
}

std::uint64_t case_seed(std::uint64_t root_seed, int case_id) {
  return splitmix64(root_seed ^ splitmix64(static_cast<std::uint64_t>(case_id)));
}

ValidationRow validate_case(int case_id, const PolicyConfig& cfg, double horizon_days,
                            int n_reps, std::uint64_t seed, unsigned threads) {
  ValidationRow row;
  row.case_id = case_id;
  row.config = cfg;
  try {
    const AnalysisResult res = analyze(cfg);
    row.m_analytic = mean_stock(res.pi_rc);
    row.s_analytic = expected_shortage(res.pi_rc, cfg.n_sat_nominal);
    row.sim = validate(cfg, res, horizon_days, n_reps, seed, threads);
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

ValidationSummary summarize_validation(std::vector<ValidationRow> rows) {
  ValidationSummary summary;
  std::vector<double> em;
  std::vector<double> es;
  for (const auto& row : rows) {
    if (!row.error.empty() || !row.sim) {
      ++summary.failed_cases;
      continue;
    }
    em.push_back(row.sim->rel_err_m.value_or(0.0));
    es.push_back(row.sim->rel_err_s.value_or(0.0));
  }
  auto mean = [](const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  };
  auto p95 = [](std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * v.size()));
    return v[std::max<std::size_t>(rank, 1) - 1];
  };
  summary.mean_rel_err_m = mean(em);
  summary.p95_rel_err_m = p95(em);
  summary.mean_rel_err_s = mean(es);
  summary.p95_rel_err_s = p95(es);
  summary.rows = std::move(rows);
  return summary;
}

ValidationSummary lhs_validation_suite(const PolicyConfig& base, const ParameterBox& box,
                                       int n_cases, double horizon_days, int n_reps,
                                       std::uint64_t seed, unsigned threads) {
  const auto cases = latin_hypercube(base, box, n_cases, seed);
  std::vector<ValidationRow> rows;
  rows.reserve(cases.size());
  for (int i = 0; i < n_cases; ++i) {
    rows.push_back(validate_case(i, cases[i], horizon_days, n_reps, case_seed(seed, i), threads));
  }
  return summarize_validation(std::move(rows));
}

}  // namespace spareops
