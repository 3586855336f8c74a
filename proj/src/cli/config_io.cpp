#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <string>

#include "spareops/cli.hpp"
#include "spareops/errors.hpp"

namespace spareops::cli {

using nlohmann::json;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "q",           "r",           "n_sat_nominal",   "n_orbit",   "lambda_sat_per_year",
      "tau_mc_days", "mu_lv_days",  "tau_lv_days",     "days_per_year", "c_build",
      "c_hold_per_year", "c_lv_unit", "c_lv_full",     "m_sat",     "m_payload",
      "rideshare_available", "epsilon", "q_range",     "r_range",   "lambda_grid",
      "horizon_days", "n_reps",     "seed"};
  return keys;
}

const json* find(const json& doc, const char* key, bool required) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    if (required) throw ConfigError(key, "required key is missing");
    return nullptr;
  }
  return &*it;
}

void read_int(const json& doc, const char* key, bool required, int& out) {
  const json* v = find(doc, key, required);
  if (v == nullptr) return;
  if (!v->is_number_integer()) throw ConfigError(key, "expected an integer");
  const auto value = v->get<long long>();
  if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max()) {
    throw ConfigError(key, "integer out of range");
  }
  out = static_cast<int>(value);
}

void read_real(const json& doc, const char* key, bool required, double& out) {
  const json* v = find(doc, key, required);
  if (v == nullptr) return;
  if (!v->is_number()) throw ConfigError(key, "expected a number");
  out = v->get<double>();
}

void read_bool(const json& doc, const char* key, bool required, bool& out) {
  const json* v = find(doc, key, required);
  if (v == nullptr) return;
  if (!v->is_boolean()) throw ConfigError(key, "expected true or false");
  out = v->get<bool>();
}

IntRange read_range(const json& v, const std::string& key) {
  if (v.is_string()) return parse_int_range(v.get<std::string>(), key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
      !v[1].is_number_integer()) {
    throw ConfigError(key, "expected [lo, hi] integers or \"lo:hi\"");
  }
  IntRange range{v[0].get<int>(), v[1].get<int>()};
  if (range.hi < range.lo) throw ConfigError(key, "hi must be >= lo");
  return range;
}

double parse_double(std::string_view text, const std::string& key) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(key, "cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

int parse_int(std::string_view text, const std::string& key) {
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(key, "cannot parse integer '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

IntRange parse_int_range(std::string_view spec, const std::string& key) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw ConfigError(key, "expected lo:hi");
  IntRange range{parse_int(spec.substr(0, colon), key), parse_int(spec.substr(colon + 1), key)};
  if (range.hi < range.lo) throw ConfigError(key, "hi must be >= lo");
  return range;
}

std::vector<double> parse_lambda_grid(std::string_view spec) {
  const std::string key = "lambda_grid";
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : spec.find(':', c1 + 1);
  if (c2 == std::string_view::npos) throw ConfigError(key, "expected start:stop:logN or linN");
  const double start = parse_double(spec.substr(0, c1), key);
  const double stop = parse_double(spec.substr(c1 + 1, c2 - c1 - 1), key);
  const std::string_view kind = spec.substr(c2 + 1);
  if (kind.size() < 4 || (kind.substr(0, 3) != "log" && kind.substr(0, 3) != "lin")) {
    throw ConfigError(key, "grid kind must be logN or linN");
  }
  const bool log_scale = kind.substr(0, 3) == "log";
  const int n = parse_int(kind.substr(3), key);
  if (n < 1) throw ConfigError(key, "need at least one point");
  if (!(start > 0.0) || !(stop >= start)) throw ConfigError(key, "need 0 < start <= stop");

  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    grid[i] = log_scale ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
                        : start + t * (stop - start);
  }
  grid.front() = start;
  if (n > 1) grid.back() = stop;
  return grid;
}

RunConfig parse_run_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!known_keys().contains(key)) throw ConfigError(key, "unknown key");
  }

  RunConfig rc;
  PolicyConfig& p = rc.policy;
  read_int(doc, "q", true, p.q);
  read_int(doc, "r", true, p.r);
  read_int(doc, "n_sat_nominal", false, p.n_sat_nominal);
  read_int(doc, "n_orbit", false, p.n_orbit);
  read_real(doc, "lambda_sat_per_year", true, p.lambda_sat_per_year);
  read_real(doc, "tau_mc_days", false, p.tau_mc_days);
  read_real(doc, "mu_lv_days", true, p.mu_lv_days);
  read_real(doc, "tau_lv_days", true, p.tau_lv_days);
  read_real(doc, "days_per_year", false, p.days_per_year);
  read_real(doc, "c_build", true, p.c_build);
  read_real(doc, "c_hold_per_year", true, p.c_hold_per_year);
  read_real(doc, "c_lv_unit", true, p.c_lv_unit);
  read_real(doc, "c_lv_full", true, p.c_lv_full);
  read_real(doc, "m_sat", true, p.m_sat);
  read_real(doc, "m_payload", true, p.m_payload);
  read_bool(doc, "rideshare_available", true, p.rideshare_available);
  read_real(doc, "epsilon", true, p.epsilon);
  p.validate();

  rc.q_range = default_q_range();
  rc.r_range = default_r_range(p.n_sat_nominal);
  if (const json* v = find(doc, "q_range", false)) rc.q_range = read_range(*v, "q_range");
  if (const json* v = find(doc, "r_range", false)) rc.r_range = read_range(*v, "r_range");
  if (rc.q_range.lo < 1) throw ConfigError("q_range", "q must be >= 1");
  if (rc.r_range.lo < 0) throw ConfigError("r_range", "r must be >= 0");

  if (const json* v = find(doc, "lambda_grid", false)) {
    if (v->is_string()) {
      rc.lambda_grid = parse_lambda_grid(v->get<std::string>());
    } else if (v->is_array()) {
      for (std::size_t i = 0; i < v->size(); ++i) {
        const auto& x = (*v)[i];
        const std::string key = "lambda_grid[" + std::to_string(i) + "]";
        if (!x.is_number()) throw ConfigError(key, "expected a number");
        const double lambda = x.get<double>();
        if (!(lambda > 0.0)) throw ConfigError(key, "must be > 0");
        if (!rc.lambda_grid.empty() && !(lambda > rc.lambda_grid.back())) {
          throw ConfigError(key, "rates must be strictly ascending");
        }
        rc.lambda_grid.push_back(lambda);
      }
    } else {
      throw ConfigError("lambda_grid", "expected an array of rates or start:stop:logN");
    }
  }

  rc.horizon_days = 20.0 * p.days_per_year;
  read_real(doc, "horizon_days", false, rc.horizon_days);
  if (!(rc.horizon_days >= 100.0 * p.tau_mc_days)) {
    throw ConfigError("horizon_days", "must cover at least 100 Markov steps");
  }
  read_int(doc, "n_reps", false, rc.n_reps);
  if (rc.n_reps < 1) throw ConfigError("n_reps", "must be >= 1");
  if (const json* v = find(doc, "seed", false)) {
    if (!v->is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
    rc.seed = v->get<std::uint64_t>();
  }
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", "invalid JSON in '" + path.string() + "': " + e.what());
  }
  return parse_run_config(doc);
}

PolicyConfig load_config(const std::filesystem::path& path) { return load_run_config(path).policy; }

json config_to_json(const PolicyConfig& p) {
  return json{
      {"q", p.q},
      {"r", p.r},
      {"n_sat_nominal", p.n_sat_nominal},
      {"n_orbit", p.n_orbit},
      {"lambda_sat_per_year", p.lambda_sat_per_year},
      {"tau_mc_days", p.tau_mc_days},
      {"mu_lv_days", p.mu_lv_days},
      {"tau_lv_days", p.tau_lv_days},
      {"days_per_year", p.days_per_year},
      {"c_build", p.c_build},
      {"c_hold_per_year", p.c_hold_per_year},
      {"c_lv_unit", p.c_lv_unit},
      {"c_lv_full", p.c_lv_full},
      {"m_sat", p.m_sat},
      {"m_payload", p.m_payload},
      {"rideshare_available", p.rideshare_available},
      {"epsilon", p.epsilon},
      {"derived",
       {{"n_sat", p.n_sat()},
        {"lambda_step", p.lambda_step()},
        {"lead_alpha", p.lead_alpha()},
        {"lead_fixed_steps", p.lead_fixed_steps()},
        {"lead_time_grid_aligned", p.lead_time_grid_aligned()}}},
  };
}

}  // namespace spareops::cli
