#pragma once

#include <string>
#include <vector>

#include "gwdrought/chrono_grid.hpp"
#include "gwdrought/optimal_period.hpp"

namespace gwd {

/// Week w of year Y covers the seven days starting on day-of-year 7(w-1)+1.
/// Week 53 is the one- or two-day remainder and its midpoint falls in the
/// next January.
struct WeekKey {
    int year = 2000;
    int week = 1; ///< 1..53

    [[nodiscard]] MonthIndex midpoint_month() const;
    friend bool operator==(const WeekKey&, const WeekKey&) = default;
};

struct WeeklySeries {
    std::vector<WeekKey> weeks;
    std::vector<double> values;

    void validate() const;
};

/// Weekly composites on a grid, stored week-major.
struct WeeklyField {
    Grid2D grid;
    std::vector<WeekKey> weeks;
    std::vector<double> values; ///< values[w * cells + cell]
};

/// Monthly mean of the weeks whose midpoint falls in each month, then
/// interior gaps filled linearly. Throws InsufficientData when fewer than two
/// months receive a value.
[[nodiscard]] MonthlySeries weekly_to_monthly(const WeeklySeries& w);

/// Per-cell weekly_to_monthly on a common axis. Cells with fewer than two
/// populated months come back all missing.
[[nodiscard]] GriddedSeries weekly_to_monthly(const WeeklyField& w);

struct IrrigationFraction {
    Grid2D grid;
    std::vector<double> gw_fraction;     ///< % of area irrigated with groundwater
    std::vector<double> total_equipped;  ///< % of area equipped for irrigation

    void validate() const;
};

/// Class 1 marks membership, 0 non-membership, kNoClass missing input.
struct IrrigationMasks {
    CategoricalGrid gw_irrigated;
    CategoricalGrid non_irrigated;
};

/// gw-irrigated iff gw_fraction > gw_threshold; non-irrigated iff
/// total_equipped < rainfed_threshold and not gw-irrigated.
[[nodiscard]] IrrigationMasks irrigation_masks(const IrrigationFraction& f, double gw_threshold = 60.0,
                                               double rainfed_threshold = 20.0);

struct Season {
    std::string label;
    std::vector<int> months; ///< in season order; the first month opens the season-year

    static Season kharif() { return {"kharif", {6, 7, 8, 9}}; }
    static Season rabi() { return {"rabi", {10, 11, 12, 1, 2, 3}}; }

    /// Calendar year of `month` within season-year `season_year`.
    [[nodiscard]] int calendar_year(int season_year, int month) const;
};

struct SeasonalSeries {
    std::string label;
    std::vector<int> years;
    std::vector<double> values;
};

/// Mean of member months per season-year, labelled by the year holding the
/// season's first month. Only season-years whose months all lie on the axis
/// are emitted; a missing member month makes the year missing.
[[nodiscard]] SeasonalSeries seasonal_mean(const MonthlySeries& s, const Season& season);

/// k-month accumulated NDVI anomalies aligned to `target_axis`.
/// Throws InsufficientData when the anomalies do not start k-1 months before.
[[nodiscard]] MonthlySeries accumulated_ndvi(const MonthlySeries& ndvi_anomaly, const TimeAxis& target_axis, std::size_t k);

/// Expanding-window median correlation between GWSA and k-month accumulated
/// NDVI anomalies.
[[nodiscard]] ExpandingCorrelation ndvi_gwsa_coupling(const MonthlySeries& ndvi_anomaly, const MonthlySeries& gwsa,
                                                      std::size_t k, const WindowScheme& w);

struct StratifiedSeasonal {
    SeasonalSeries gw_irrigated;
    SeasonalSeries non_irrigated;
};

/// Seasonal regional means over gw-irrigated and over non-irrigated cells of
/// `region`. An empty stratum yields an all-missing series.
[[nodiscard]] StratifiedSeasonal irrigated_vs_rainfed_ndvi(const GriddedSeries& ndvi, const IrrigationMasks& masks,
                                                           const RegionMask& regions, const std::string& region,
                                                           const Season& season);

/// Region labels carried onto a finer (or any) grid by nearest coarse cell.
/// Cells outside the coarse grid get no region.
[[nodiscard]] RegionMask project_regions(const RegionMask& regions, const Grid2D& target);

} // namespace gwd
