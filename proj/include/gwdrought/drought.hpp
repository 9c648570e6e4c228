#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gwdrought/chrono_grid.hpp"

namespace gwd {

struct DroughtEvent {
    MonthIndex start;
    MonthIndex end;
    int duration = 0;                ///< inclusive month count
    double peak_departure = 0.0;     ///< most negative anomaly inside the event
    MonthIndex peak_month;
    bool persistent = false;         ///< run reaches the final month of the series

    [[nodiscard]] int duration_exclusive() const noexcept { return duration - 1; }
};

struct Extreme {
    double value = kMissing;
    MonthIndex month;
};

struct DroughtCatalog {
    std::string series_id;
    std::vector<DroughtEvent> events; ///< chronological, non-overlapping
    std::optional<Extreme> wettest;
    std::optional<Extreme> driest;

    /// Most recent event, if any.
    [[nodiscard]] const DroughtEvent* latest() const noexcept { return events.empty() ? nullptr : &events.back(); }
    /// Every event sharing the maximal duration, chronological.
    [[nodiscard]] std::vector<DroughtEvent> longest() const;
};

/// Fills interior missing runs by linear interpolation between the bracketing
/// present values. Leading and trailing gaps stay missing; present values are
/// untouched. Throws InsufficientData for fewer than two present values.
[[nodiscard]] MonthlySeries fill_gaps_linear(const MonthlySeries& s);

/// Maximal runs of strictly negative anomalies lasting at least `min_run`
/// months. Missing months end a run.
[[nodiscard]] DroughtCatalog detect_events(const MonthlySeries& anomaly, int min_run = 3, std::string series_id = {});

/// Per-cell, per-month drought state.
struct DroughtMask {
    static constexpr std::uint8_t kNoDrought = 0;
    static constexpr std::uint8_t kDrought = 1;
    static constexpr std::uint8_t kNoData = 255;

    Grid2D grid;
    TimeAxis axis;
    std::vector<std::uint8_t> state; ///< same layout as GriddedSeries::values

    [[nodiscard]] std::uint8_t at(std::size_t t, std::size_t i, std::size_t j) const noexcept {
        return state[(t * grid.nlat + i) * grid.nlon + j];
    }
};

/// Marks months that belong to a detected event in each cell's series.
[[nodiscard]] DroughtMask drought_mask(const GriddedSeries& field, int min_run = 3);

/// Percentage of the region's weighted cells in drought, per month. Cells
/// without data in a month are left out of that month's denominator; a
/// month with no data anywhere in the region is missing.
[[nodiscard]] MonthlySeries areal_extent(const DroughtMask& mask, const RegionMask& regions, std::string_view region,
                                         Weighting mode = Weighting::area);

/// Month of the largest extent (first on ties), if any month is present.
[[nodiscard]] std::optional<Extreme> most_widespread(const MonthlySeries& extent);

/// 100 * (mean(late) - mean(early)) / |mean(early)|.
/// Throws gwd::Error("undefined baseline") when the early mean is zero and
/// InsufficientData when a range has no present values.
[[nodiscard]] double period_change(const MonthlySeries& s, const MonthRange& early, const MonthRange& late);

} // namespace gwd
