#include "spareops/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <stdexcept>
#include <thread>

#include "spareops/policy_analysis.hpp"

namespace spareops {

IntRange default_q_range() { return IntRange{1, 10}; }

IntRange default_r_range(int n_nominal) {
  return IntRange{std::max(0, n_nominal - 5), n_nominal + 5};
}

GridRecord evaluate_design(const PolicyConfig& cfg) {
  const AnalysisResult res = analyze(cfg);
  GridRecord rec;
  rec.q = cfg.q;
  rec.r = cfg.r;
  rec.costs = cost_breakdown(res, cfg);
  rec.shortage = expected_shortage(res.pi_rc, cfg.n_sat_nominal);
  rec.constraints = constraint_eval(res, cfg);
  rec.tau_rc_days = res.tau_rc_days;
  return rec;
}

std::vector<GridRecord> evaluate_grid(const PolicyConfig& cfg_template, IntRange q_range,
                                      IntRange r_range, unsigned threads) {
  if (q_range.size() == 0 || r_range.size() == 0) {
    throw std::invalid_argument("evaluate_grid: empty search range");
  }
  if (q_range.lo < 1) throw std::invalid_argument("evaluate_grid: q must be >= 1");
  if (r_range.lo < 0) throw std::invalid_argument("evaluate_grid: r must be >= 0");

  const std::size_t count = static_cast<std::size_t>(q_range.size()) * r_range.size();
  std::vector<GridRecord> grid(count);
  std::vector<std::exception_ptr> errors(count);

  auto work = [&](std::size_t idx) {
    PolicyConfig cfg = cfg_template;
    cfg.q = q_range.lo + static_cast<int>(idx / r_range.size());
    cfg.r = r_range.lo + static_cast<int>(idx % r_range.size());
    try {
      grid[idx] = evaluate_design(cfg);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) work(i);
      });
    }
  }

  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return grid;
}

namespace {

bool better(const GridRecord& a, const GridRecord& b) {
  if (a.costs.c_total_rate != b.costs.c_total_rate) {
    return a.costs.c_total_rate < b.costs.c_total_rate;
  }
  if (a.q != b.q) return a.q < b.q;
  return a.r < b.r;
}

}  // namespace

OptimizationResult select_optimum(std::vector<GridRecord> grid, IntRange q_range,
                                  IntRange r_range) {
  if (grid.empty()) throw std::invalid_argument("select_optimum: empty grid");
  const GridRecord* best = nullptr;
  for (const auto& rec : grid) {
    if (rec.feasible() && (best == nullptr || better(rec, *best))) best = &rec;
  }
  if (best == nullptr) {
    const auto least_short = std::min_element(
        grid.begin(), grid.end(),
        [](const GridRecord& a, const GridRecord& b) { return a.shortage < b.shortage; });
    throw InfeasibleDesignError("no feasible (q, r) in q=[" + std::to_string(q_range.lo) + "," +
                                    std::to_string(q_range.hi) + "], r=[" +
                                    std::to_string(r_range.lo) + "," +
                                    std::to_string(r_range.hi) + "]",
                                *least_short);
  }
  OptimizationResult out;
  out.best = *best;
  out.grid = std::move(grid);
  out.q_range = q_range;
  out.r_range = r_range;
  return out;
}

OptimizationResult optimize(const PolicyConfig& cfg_template, IntRange q_range, IntRange r_range,
                            unsigned threads) {
  return select_optimum(evaluate_grid(cfg_template, q_range, r_range, threads), q_range, r_range);
}

std::vector<SweepPoint> sweep_failure_rate(const PolicyConfig& cfg_template,
                                           std::span<const double> lambdas, IntRange q_range,
                                           IntRange r_range, unsigned threads) {
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0)) throw std::invalid_argument("sweep_failure_rate: rates must be > 0");
    if (i > 0 && !(lambdas[i] > lambdas[i - 1])) {
      throw std::invalid_argument("sweep_failure_rate: rates must be ascending");
    }
  }
  std::vector<SweepPoint> points;
  points.reserve(lambdas.size());
  for (double lambda : lambdas) {
    PolicyConfig cfg = cfg_template;
    cfg.lambda_sat_per_year = lambda;
    SweepPoint pt;
    pt.lambda_sat_per_year = lambda;
    try {
      pt.result = optimize(cfg, q_range, r_range, threads);
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
    points.push_back(std::move(pt));
  }
  return points;
}

}  // namespace spareops
