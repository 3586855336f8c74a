#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "spareops/cli.hpp"
#include "spareops/montecarlo.hpp"
#include "spareops/optimizer.hpp"
#include "spareops/policy_analysis.hpp"

namespace spareops::cli {

inline constexpr const char* kAnalysisSchema = "spareops.analysis/v1";
inline constexpr const char* kGridSchema = "spareops.grid/v1";
inline constexpr const char* kSweepSchema = "spareops.sweep/v1";
inline constexpr const char* kValidationSchema = "spareops.validation/v1";

/// Reproducibility block embedded in every output. Holds no timestamps so
/// that identical inputs give identical bytes.
nlohmann::json manifest_block(const std::string& command, const RunConfig& rc,
                              const nlohmann::json& options);

std::string format_number(double v);

nlohmann::json distribution_json(const StateDistribution& pi);

nlohmann::json analysis_report(const AnalysisResult& res, const nlohmann::json& manifest);

void write_grid_csv(std::ostream& out, const std::vector<GridRecord>& grid,
                    const nlohmann::json& manifest);

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points,
                     const nlohmann::json& manifest);

void write_validation_csv(std::ostream& out, const ValidationSummary& summary,
                          const nlohmann::json& manifest);

}  // namespace spareops::cli
