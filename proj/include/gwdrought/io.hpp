#pragma once

// CSV readers and writers for every file format the toolkit exchanges.
// Missing values are empty fields; months are written as integer year and
// month columns; reals use the shortest round-trip representation.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gwdrought/anomaly.hpp"
#include "gwdrought/chrono_grid.hpp"
#include "gwdrought/vegetation.hpp"

namespace gwd::io {

/// A required input file does not exist (CLI exit code 2).
class MissingInput : public Error {
public:
    explicit MissingInput(const std::filesystem::path& p) : Error("missing input: " + p.string()), path(p) {}
    std::filesystem::path path;
};

/// A file violates its format (CLI exit code 3). `row` is the 1-based line.
class FormatError : public Error {
public:
    FormatError(const std::filesystem::path& p, std::size_t r, const std::string& what)
        : Error(p.string() + ":" + std::to_string(r) + ": " + what), path(p), row(r) {}
    std::filesystem::path path;
    std::size_t row;
};

/// Shortest representation that parses back to the same double; "" for missing.
[[nodiscard]] std::string format_real(double v);

/// Regular grid from cell-center coordinates. Throws gwd::Error when the
/// coordinates are not on a regular lattice.
[[nodiscard]] Grid2D infer_grid(std::vector<double> lats, std::vector<double> lons);

// year,month,lat,lon,value
[[nodiscard]] GriddedSeries read_gridded_csv(const std::filesystem::path& path);
void write_gridded_csv(const std::filesystem::path& path, const GriddedSeries& f);

// year,month,value
[[nodiscard]] MonthlySeries read_series_csv(const std::filesystem::path& path);
void write_series_csv(const std::filesystem::path& path, const MonthlySeries& s);

// well_id,lat,lon,specific_yield,year,month,level_m_bgl
[[nodiscard]] std::vector<StationRecord> read_stations_csv(const std::filesystem::path& path);
void write_stations_csv(const std::filesystem::path& path, const std::vector<StationRecord>& stations);

// lat,lon,region[,weight]  -- placed on `grid`; unlisted cells get no region
[[nodiscard]] RegionMask read_region_mask_csv(const std::filesystem::path& path, const Grid2D& grid);
void write_region_mask_csv(const std::filesystem::path& path, const RegionMask& mask);

// lat,lon,class
[[nodiscard]] CategoricalGrid read_categorical_csv(const std::filesystem::path& path);
void write_categorical_csv(const std::filesystem::path& path, const CategoricalGrid& g);

// year,week,lat,lon,value
[[nodiscard]] WeeklyField read_weekly_csv(const std::filesystem::path& path);
void write_weekly_csv(const std::filesystem::path& path, const WeeklyField& w);

// lat,lon,gw_fraction,total_equipped_fraction
[[nodiscard]] IrrigationFraction read_irrigation_csv(const std::filesystem::path& path);
void write_irrigation_csv(const std::filesystem::path& path, const IrrigationFraction& f);

/// Replaces the file with `text`, byte for byte.
void write_text(const std::filesystem::path& path, std::string_view text);
[[nodiscard]] std::string read_text(const std::filesystem::path& path);

} // namespace gwd::io
