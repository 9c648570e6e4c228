#pragma once

// Helpers shared by the command implementations.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gwdrought/chrono_grid.hpp"
#include "gwdrought/cli.hpp"
#include "gwdrought/drought.hpp"
#include "gwdrought/io.hpp"

namespace gwd::cli::detail {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

inline const std::vector<std::string> kRoutes = {"grace", "well"};

/// Configured input path or MissingInput naming the config key.
const fs::path& require_input(const std::optional<fs::path>& p, const std::string& key);

/// `path` if it exists, otherwise MissingArtifact naming `command`.
const fs::path& require_artifact(const fs::path& path, const std::string& command);

fs::path anomaly_dir(const RunConfig& cfg);
fs::path optimal_dir(const RunConfig& cfg);
fs::path drought_dir(const RunConfig& cfg);
fs::path ndvi_dir(const RunConfig& cfg);
fs::path attribute_dir(const RunConfig& cfg);
fs::path report_dir(const RunConfig& cfg);

fs::path regional_series_path(const RunConfig& cfg, const std::string& series, const std::string& region);
fs::path optimal_json_path(const RunConfig& cfg, const std::string& route, const std::string& method,
                           const std::string& region);

/// Region labels written by `anomaly`.
std::vector<std::string> region_names(const RunConfig& cfg);

/// Routes whose gridded GWSA `anomaly` produced; MissingArtifact when none.
std::vector<std::string> available_routes(const RunConfig& cfg);

/// Accumulated regional precipitation anomaly over `k`, sliced to `axis`.
MonthlySeries accumulated_precip(const MonthlySeries& precip_anomaly, std::size_t k, const TimeAxis& axis);

/// k* from an optimal-period JSON, falling back to the strongest k when
/// nothing was significant.
std::size_t chosen_k(const json& optimal);

json read_json(const fs::path& path);
void write_json(const fs::path& path, const json& j);

/// Missing values become null.
json real(double v);
json event_json(const DroughtEvent& e);

void write_events_csv(const fs::path& path, const DroughtCatalog& cat);

/// "YYYY-MM_YYYY-MM", safe in file names.
std::string range_tag(const MonthRange& r);

} // namespace gwd::cli::detail
