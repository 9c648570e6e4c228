#pragma once

// Monthly time axis, regular lat/lon grid geometry, regions and spatial
// aggregation. Every other module builds on these types.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gwdrought/error.hpp"

namespace gwd {

/// Missing values are quiet NaNs throughout the library.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) noexcept { return v != v; }

// ---------------------------------------------------------------------------
// Time
// ---------------------------------------------------------------------------

struct MonthIndex {
    int year = 2000;
    int month = 1; ///< 1..12

    MonthIndex() = default;
    MonthIndex(int y, int m);

    /// Months since year 0, January.
    [[nodiscard]] std::int64_t ordinal() const noexcept {
        return static_cast<std::int64_t>(year) * 12 + (month - 1);
    }
    [[nodiscard]] static MonthIndex from_ordinal(std::int64_t ordinal);

    [[nodiscard]] MonthIndex plus(std::int64_t months) const { return from_ordinal(ordinal() + months); }

    /// `YYYY-MM`
    [[nodiscard]] std::string str() const;
    /// Accepts `YYYY-MM`; throws gwd::Error otherwise.
    [[nodiscard]] static MonthIndex parse(std::string_view text);

    friend bool operator==(const MonthIndex&, const MonthIndex&) = default;
    friend std::strong_ordering operator<=>(const MonthIndex& a, const MonthIndex& b) {
        return a.ordinal() <=> b.ordinal();
    }
};

/// b - a in whole months.
[[nodiscard]] std::int64_t months_between(const MonthIndex& a, const MonthIndex& b) noexcept;

/// Inclusive range of months.
struct MonthRange {
    MonthIndex first;
    MonthIndex last;

    [[nodiscard]] bool contains(const MonthIndex& m) const noexcept { return first <= m && m <= last; }
    [[nodiscard]] std::int64_t length() const noexcept { return months_between(first, last) + 1; }

    /// `YYYY-MM:YYYY-MM`
    [[nodiscard]] std::string str() const;
    [[nodiscard]] static MonthRange parse(std::string_view text);

    friend bool operator==(const MonthRange&, const MonthRange&) = default;
};

struct TimeAxis {
    MonthIndex start;
    std::size_t length = 1;

    TimeAxis() = default;
    TimeAxis(MonthIndex s, std::size_t n);
    [[nodiscard]] static TimeAxis spanning(const MonthRange& r);

    [[nodiscard]] MonthIndex at(std::size_t i) const { return start.plus(static_cast<std::int64_t>(i)); }
    [[nodiscard]] MonthIndex last() const { return at(length - 1); }
    [[nodiscard]] MonthRange range() const { return {start, last()}; }
    [[nodiscard]] bool contains(const MonthIndex& m) const noexcept;
    /// Position of `m` on the axis, or nullopt when outside.
    [[nodiscard]] std::optional<std::size_t> index_of(const MonthIndex& m) const noexcept;

    friend bool operator==(const TimeAxis&, const TimeAxis&) = default;
};

/// One variable on a monthly axis.
struct MonthlySeries {
    TimeAxis axis;
    std::vector<double> values;
    std::string units;

    MonthlySeries() = default;
    MonthlySeries(TimeAxis a, std::vector<double> v, std::string u = {});
    /// All-missing series over `a`.
    [[nodiscard]] static MonthlySeries missing(TimeAxis a, std::string u = {});

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] double at(const MonthIndex& m) const;
    [[nodiscard]] std::size_t count_present() const noexcept;

    /// Sub-series over `r`; months outside this series' axis come back missing.
    [[nodiscard]] MonthlySeries slice(const MonthRange& r) const;
};

// ---------------------------------------------------------------------------
// Space
// ---------------------------------------------------------------------------

struct CellIndex {
    std::size_t i = 0; ///< latitude row
    std::size_t j = 0; ///< longitude column
    friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

/// Regular lat/lon grid. Cell centers sit at lat0 + i*dlat, lon0 + j*dlon.
struct Grid2D {
    double lat0 = 0.0;
    double lon0 = 0.0;
    double dlat = 1.0;
    double dlon = 1.0;
    std::size_t nlat = 1;
    std::size_t nlon = 1;

    Grid2D() = default;
    Grid2D(double lat0_, double lon0_, double dlat_, double dlon_, std::size_t nlat_, std::size_t nlon_);

    [[nodiscard]] std::size_t cells() const noexcept { return nlat * nlon; }
    [[nodiscard]] std::size_t flat(std::size_t i, std::size_t j) const noexcept { return i * nlon + j; }
    [[nodiscard]] double lat(std::size_t i) const noexcept { return lat0 + static_cast<double>(i) * dlat; }
    [[nodiscard]] double lon(std::size_t j) const noexcept { return lon0 + static_cast<double>(j) * dlon; }

    /// Geometry equality up to 1e-9 degrees.
    [[nodiscard]] bool same_as(const Grid2D& other) const noexcept;
};

/// Stack of monthly fields, stored time-major: values[(t * nlat + i) * nlon + j].
struct GriddedSeries {
    Grid2D grid;
    TimeAxis axis;
    std::vector<double> values;
    std::string units;

    GriddedSeries() = default;
    GriddedSeries(Grid2D g, TimeAxis a, std::string u = {});                            // all missing
    GriddedSeries(Grid2D g, TimeAxis a, std::vector<double> v, std::string u = {});

    [[nodiscard]] std::size_t index(std::size_t t, std::size_t i, std::size_t j) const noexcept {
        return (t * grid.nlat + i) * grid.nlon + j;
    }
    [[nodiscard]] double at(std::size_t t, std::size_t i, std::size_t j) const noexcept { return values[index(t, i, j)]; }
    double& at(std::size_t t, std::size_t i, std::size_t j) noexcept { return values[index(t, i, j)]; }

    [[nodiscard]] MonthlySeries cell_series(std::size_t i, std::size_t j) const;
    void set_cell_series(std::size_t i, std::size_t j, const MonthlySeries& s);
};

/// How cells are weighted when a region is averaged.
enum class Weighting {
    area,     ///< explicit mask weights if present, otherwise cos(latitude)
    uniform,  ///< every member cell counts once
};

struct RegionMask {
    Grid2D grid;
    std::vector<std::string> membership; ///< per cell; empty string = no region
    std::vector<double> weights;         ///< optional per-cell area weights (empty = none given)

    RegionMask() = default;
    RegionMask(Grid2D g, std::vector<std::string> labels, std::vector<double> w = {});

    /// Region labels in first-appearance order.
    [[nodiscard]] std::vector<std::string> regions() const;
    [[nodiscard]] bool has_region(std::string_view label) const;
    /// Weight used for cell `flat` under `mode`.
    [[nodiscard]] double weight(std::size_t flat, Weighting mode) const;
};

struct CategoricalGrid {
    static constexpr int kNoClass = std::numeric_limits<int>::min();

    Grid2D grid;
    std::vector<int> classes;

    CategoricalGrid() = default;
    CategoricalGrid(Grid2D g, std::vector<int> c);

    [[nodiscard]] int at(std::size_t i, std::size_t j) const noexcept { return classes[grid.flat(i, j)]; }
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Per-month weighted mean over non-missing member cells of `region`.
/// A month is missing when every member cell is missing there.
/// Throws gwd::Error("unknown region") when the label does not occur in the mask.
[[nodiscard]] MonthlySeries regional_mean(const GriddedSeries& field, const RegionMask& mask,
                                          std::string_view region, Weighting mode = Weighting::area);

/// Nearest cell center in degree space. Ties go to the lower i, then lower j.
/// Throws gwd::Error("outside grid") beyond the grid box extended by half a cell.
[[nodiscard]] CellIndex nearest_cell(const Grid2D& grid, double lat, double lon);

/// Integer refinement ratio and offsets that place `coarse` on `fine`.
struct Refinement {
    std::size_t ratio_lat = 1;
    std::size_t ratio_lon = 1;
    std::size_t offset_lat = 0;
    std::size_t offset_lon = 0;
};

/// Throws gwd::Error when coarse cells are not unions of whole fine cells.
[[nodiscard]] Refinement refinement(const Grid2D& fine, const Grid2D& coarse);

/// Modal fine class inside each coarse cell; ties go to the smallest label.
/// kNoClass cells are ignored.
[[nodiscard]] CategoricalGrid majority_resample(const CategoricalGrid& fine, const Grid2D& coarse);

/// Coarse value = mean of non-missing fine values whose mask class equals
/// `keep_class` (all fine cells when no mask). A coarse cell is missing when
/// nothing contributes, or when the share of fine cells carrying `keep_class`
/// is not strictly above `min_class_fraction`.
[[nodiscard]] GriddedSeries block_mean_resample(const GriddedSeries& fine, const Grid2D& coarse,
                                                const CategoricalGrid* mask = nullptr, int keep_class = 1,
                                                double min_class_fraction = 0.0);

} // namespace gwd
