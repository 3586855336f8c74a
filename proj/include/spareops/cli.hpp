#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "spareops/config.hpp"
#include "spareops/optimizer.hpp"

namespace spareops::cli {

/// Everything a config file may hold: the policy itself plus run controls.
struct RunConfig {
  PolicyConfig policy;
  IntRange q_range;
  IntRange r_range;
  std::vector<double> lambda_grid;
  double horizon_days = 20.0 * 365.25;
  int n_reps = 1000;
  std::uint64_t seed = 1;
};

/// Strict parse of a config document. Unknown keys, wrong types and
/// out-of-domain values raise ConfigError carrying the key path.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);
PolicyConfig load_config(const std::filesystem::path& path);

/// `start:stop:logN` or `start:stop:linN` (N >= 1 points, inclusive ends).
std::vector<double> parse_lambda_grid(std::string_view spec);

/// `lo:hi` integer interval.
IntRange parse_int_range(std::string_view spec, const std::string& key);

/// Resolved config as written into manifests, including derived quantities.
nlohmann::json config_to_json(const PolicyConfig& cfg);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitToleranceBreach = 3;

/// Command-line entry point. Returns the process exit code.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace spareops::cli
