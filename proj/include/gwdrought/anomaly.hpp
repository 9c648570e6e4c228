#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "gwdrought/chrono_grid.hpp"

namespace gwd {

/// Calendar-month means over a baseline period.
struct Climatology {
    std::array<double, 12> mean{}; ///< index 0 = January; missing if no baseline sample
    MonthRange baseline;

    [[nodiscard]] double of(const MonthIndex& m) const noexcept { return mean[static_cast<std::size_t>(m.month - 1)]; }
};

struct LevelObservation {
    MonthIndex month;
    double level_m_bgl = 0.0; ///< depth to water, metres below ground level
};

/// One observation well.
struct StationRecord {
    std::string id;
    double lat = 0.0;
    double lon = 0.0;
    double specific_yield = 0.1;
    std::vector<LevelObservation> observations; ///< strictly increasing months

    /// Throws gwd::Error when specific yield or observation ordering is invalid.
    void validate() const;
};

/// Throws gwd::Error when `baseline` is not inside the series axis.
[[nodiscard]] Climatology monthly_climatology(const MonthlySeries& s, const MonthRange& baseline);

[[nodiscard]] MonthlySeries remove_climatology(const MonthlySeries& s, const Climatology& c);

/// (x - mean) / sd over present values, sd with n-1 denominator.
/// Throws gwd::Error("degenerate series") for fewer than two values or zero variance.
[[nodiscard]] MonthlySeries standardize(const MonthlySeries& s);

/// Trailing k-month sum. Output at t covers [t-k+1, t]; it is missing when the
/// window runs off the start of the axis or holds any missing month.
[[nodiscard]] MonthlySeries accumulate(const MonthlySeries& s, std::size_t k);

/// TWSA minus the ensemble mean of the surface-storage members (mean over
/// members present at that cell and month).
[[nodiscard]] GriddedSeries grace_gwsa(const GriddedSeries& twsa, std::span<const GriddedSeries> sws);

/// Storage anomaly in mm from depth-to-water observations:
///   -(level - baseline calendar-month mean level) * 1000 * Sy
/// Depth increases mean storage decreases, hence the sign. The result is a
/// monthly series from the first to the last observation; unobserved months
/// and calendar months without baseline samples are missing.
[[nodiscard]] MonthlySeries well_gwsa(const StationRecord& st, const MonthRange& baseline);

/// Unweighted mean of well_gwsa over the stations falling in each cell
/// (nearest cell). Stations outside the grid are ignored. The axis spans
/// all observations.
[[nodiscard]] GriddedSeries well_field(std::span<const StationRecord> stations, const Grid2D& grid,
                                       const MonthRange& baseline);

} // namespace gwd
