#include "reports.hpp"

#include <fmt/format.h>

#include "spareops/metrics.hpp"

namespace spareops::cli {

using nlohmann::json;

namespace {

void write_header(std::ostream& out, const char* schema, const json& manifest) {
  out << "# schema: " << schema << '\n';
  out << "# manifest: " << manifest.dump() << '\n';
}

}  // namespace

std::string format_number(double v) { return fmt::format("{:.10g}", v); }

json manifest_block(const std::string& command, const RunConfig& rc, const json& options) {
  return json{
      {"tool", "spareops"},
      {"version", SPAREOPS_VERSION},
      {"command", command},
      {"config", config_to_json(rc.policy)},
      {"q_range", {rc.q_range.lo, rc.q_range.hi}},
      {"r_range", {rc.r_range.lo, rc.r_range.hi}},
      {"lambda_grid", rc.lambda_grid},
      {"horizon_days", rc.horizon_days},
      {"n_reps", rc.n_reps},
      {"seed", rc.seed},
      {"options", options},
  };
}

json distribution_json(const StateDistribution& pi) {
  json states = json::array();
  json probs = json::array();
  for (int i = 0; i < pi.size(); ++i) {
    states.push_back(StateDistribution::state_of(pi.n_sat(), i));
    probs.push_back(pi.probs()[i]);
  }
  return json{{"states", states}, {"probs", probs}};
}

json analysis_report(const AnalysisResult& res, const json& manifest) {
  const PolicyConfig& cfg = res.config;
  const CostBreakdown costs = cost_breakdown(res, cfg);
  const ConstraintValues g = constraint_eval(res, cfg);
  return json{
      {"schema", kAnalysisSchema},
      {"manifest", manifest},
      {"lead_time", {{"alpha", res.lead.alpha}, {"m", res.lead.m}}},
      {"periods",
       {{"k_io", res.k_io},
        {"k_lt", res.k_lt},
        {"tau_io_days", res.tau_io_days},
        {"tau_lt_days", res.tau_lt_days},
        {"tau_rc_days", res.tau_rc_days},
        {"io_empty", !res.pi_io.has_value()}}},
      {"distributions",
       {{"pi_q", distribution_json(res.pi_q)},
        {"pi_r", distribution_json(res.pi_r)},
        {"pi_io", res.pi_io ? distribution_json(*res.pi_io) : json(nullptr)},
        {"pi_lt", distribution_json(res.pi_lt)},
        {"pi_rc", distribution_json(res.pi_rc)}}},
      {"metrics",
       {{"mean_stock", mean_stock(res.pi_rc)},
        {"expected_shortage", expected_shortage(res.pi_rc, cfg.n_sat_nominal)},
        {"expected_spares", expected_spares(res.pi_rc, cfg.n_sat_nominal)},
        {"currency", "M$/day"},
        {"c_build", costs.c_build_rate},
        {"c_hold", costs.c_hold_rate},
        {"c_launch", costs.c_launch_rate},
        {"c_total", costs.c_total_rate},
        {"launch_mode", to_string(costs.launch_mode)},
        {"m_total_kg", costs.m_total},
        {"g1", g.g1},
        {"g2", g.g2},
        {"feasible", g.feasible()}}},
      {"stationary_residual", res.stationary_residual},
  };
}

void write_grid_csv(std::ostream& out, const std::vector<GridRecord>& grid,
                    const json& manifest) {
  write_header(out, kGridSchema, manifest);
  out << "q,r,c_build,c_hold,c_launch,c_total,S,g1,g2,launch_mode,tau_rc_days\n";
  for (const auto& rec : grid) {
    out << rec.q << ',' << rec.r << ',' << format_number(rec.costs.c_build_rate) << ','
        << format_number(rec.costs.c_hold_rate) << ',' << format_number(rec.costs.c_launch_rate)
        << ',' << format_number(rec.costs.c_total_rate) << ',' << format_number(rec.shortage)
        << ',' << format_number(rec.constraints.g1) << ',' << format_number(rec.constraints.g2)
        << ',' << to_string(rec.costs.launch_mode) << ',' << format_number(rec.tau_rc_days)
        << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points,
                     const json& manifest) {
  write_header(out, kSweepSchema, manifest);
  out << "lambda,q_star,r_star,c_build,c_hold,c_launch,c_total,S,tau_rc_days,launch_mode,status\n";
  for (const auto& pt : points) {
    out << format_number(pt.lambda_sat_per_year) << ',';
    if (!pt.result) {
      std::string status = pt.error;
      for (char& c : status) {
        if (c == ',' || c == '\n') c = ';';
      }
      out << ",,,,,,,,," << status << '\n';
      continue;
    }
    const GridRecord& b = pt.result->best;
    out << b.q << ',' << b.r << ',' << format_number(b.costs.c_build_rate) << ','
        << format_number(b.costs.c_hold_rate) << ',' << format_number(b.costs.c_launch_rate)
        << ',' << format_number(b.costs.c_total_rate) << ',' << format_number(b.shortage) << ','
        << format_number(b.tau_rc_days) << ',' << to_string(b.costs.launch_mode) << ",ok\n";
  }
}

void write_validation_csv(std::ostream& out, const ValidationSummary& summary,
                          const json& manifest) {
  write_header(out, kValidationSchema, manifest);
  out << "case_id,lambda,tau_lv_days,mu_lv_days,q,r,M_analytic,M_sim,S_analytic,S_sim,"
         "rel_err_m,rel_err_s,status\n";
  for (const auto& row : summary.rows) {
    const PolicyConfig& c = row.config;
    out << row.case_id << ',' << format_number(c.lambda_sat_per_year) << ','
        << format_number(c.tau_lv_days) << ',' << format_number(c.mu_lv_days) << ',' << c.q
        << ',' << c.r << ',';
    if (!row.sim) {
      std::string status = row.error;
      for (char& ch : status) {
        if (ch == ',' || ch == '\n') ch = ';';
      }
      out << ",,,,,," << status << '\n';
      continue;
    }
    out << format_number(row.m_analytic) << ',' << format_number(row.sim->m_sim) << ','
        << format_number(row.s_analytic) << ',' << format_number(row.sim->s_sim) << ','
        << format_number(*row.sim->rel_err_m) << ',' << format_number(*row.sim->rel_err_s)
        << ",ok\n";
  }
}

}  // namespace spareops::cli
