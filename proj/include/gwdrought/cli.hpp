#pragma once

// Command-line front end. Each command reads the inputs named in a flat
// key=value config, calls the library, and writes CSV/JSON under `out`.
//
// Output layout (relative to `out`):
//   anomaly/         gwsa_<route>.csv, regional/<series>_<region>.csv
//   optimal_period/  profile_<route>_<method>_<region>.csv, optimal_<route>_<method>_<region>.json
//   drought/         events_<route>_<region>.csv, events_precip_<route>_<region>.csv,
//                    extent_<route>_<region>.csv, drought_summary.json
//   ndvi/            ndvi_monthly_fine.csv, mask_*.csv, ndvi[_anom]_<region>.csv, seasonal_<season>_<region>.csv
//   attribute/       coupling_<route>_<region>.json, attribution_<route>_<region>_<period>_ndvi<k>.json
//   report/          table_s1..s4.csv, figure CSVs, manifest.json

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gwdrought/chrono_grid.hpp"
#include "gwdrought/error.hpp"

namespace gwd::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kMissingInput = 2,
    kFormatError = 3,
    kInsufficientData = 4,
    kMissingArtifact = 5,
};

/// An upstream command has not been run (exit code 5).
class MissingArtifact : public Error {
public:
    MissingArtifact(const std::filesystem::path& p, const std::string& command)
        : Error("missing upstream artifact " + p.string() + "; run `" + command + "` first"), path(p), needed(command) {}
    std::filesystem::path path;
    std::string needed;
};

struct RunConfig {
    std::optional<std::filesystem::path> precip, twsa, wells, ndvi, irrigation, regions;
    std::vector<std::filesystem::path> sws;
    MonthRange baseline{{2002, 1}, {2016, 12}};
    std::size_t K = 180;
    std::size_t initial_window = 60;
    std::size_t well_initial_window = 40;
    double alpha = 0.05;
    std::size_t runs = 1000;
    std::uint64_t seed = 0;
    std::filesystem::path out = "out";
    std::vector<MonthRange> periods{{{2002, 1}, {2016, 12}}, {{2002, 1}, {2012, 12}}};
    std::vector<std::size_t> ndvi_k{4, 12, 24};
    int min_run = 3;
    MonthRange early{{2002, 1}, {2004, 12}};
    MonthRange late{{2014, 1}, {2016, 12}};
    double gw_threshold = 60.0;
    double rainfed_threshold = 20.0;
    bool gate = false;        ///< require > 50 % gw-irrigated pixels per coarse cell
    bool per_cell = false;    ///< also emit the per-cell optimal-period grid
    Weighting weighting = Weighting::area;
    std::size_t max_lag = 24; ///< autocorrelation lags in the report
    std::size_t threads = 0;  ///< 0 = hardware concurrency

    /// Every key with its current value, in a fixed order; paths relative to `base` when given.
    [[nodiscard]] std::vector<std::pair<std::string, std::string>> entries(const std::filesystem::path& base = {}) const;
    void validate() const;
};

/// Applies one key=value pair. Relative paths resolve against `base`.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, const std::filesystem::path& base);

/// Reads a key=value file; `#` starts a comment.
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// Renders `cfg` in the format load_config reads; paths relative to `base` when possible.
[[nodiscard]] std::string render_config(const RunConfig& cfg, const std::filesystem::path& base);

void cmd_anomaly(const RunConfig& cfg);
void cmd_optimal_period(const RunConfig& cfg);
void cmd_drought(const RunConfig& cfg);
void cmd_ndvi_prep(const RunConfig& cfg);
void cmd_attribute(const RunConfig& cfg);
void cmd_report(const RunConfig& cfg);
void cmd_synth(const RunConfig& cfg);
/// Returns false when any oracle check fails.
[[nodiscard]] bool cmd_oracle(const RunConfig& cfg);

/// Full entry point: parses flags, runs the command, maps errors to exit codes.
int run(int argc, char** argv);

} // namespace gwd::cli
