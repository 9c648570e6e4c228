#include "gwdrought/vegetation.hpp"

#include <algorithm>
#include <map>

#include "gwdrought/anomaly.hpp"
#include "gwdrought/drought.hpp"
#include "gwdrought/parallel.hpp"

namespace gwd {

namespace {

bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_year(int y) { return leap(y) ? 366 : 365; }

MonthIndex month_of_day(int year, int doy) {
    while (doy > days_in_year(year)) {
        doy -= days_in_year(year);
        ++year;
    }
    static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    for (int m = 0; m < 12; ++m) {
        const int d = kDays[m] + (m == 1 && leap(year) ? 1 : 0);
        if (doy <= d) return {year, m + 1};
        doy -= d;
    }
    return {year, 12};
}

/// Monthly means of weekly values on `axis`.
std::vector<double> monthly_means(const std::vector<WeekKey>& weeks, const std::vector<MonthIndex>& mids,
                                  const TimeAxis& axis, auto&& value_of) {
    std::vector<double> sum(axis.length, 0.0);
    std::vector<std::size_t> n(axis.length, 0);
    for (std::size_t w = 0; w < weeks.size(); ++w) {
        const double v = value_of(w);
        if (is_missing(v)) continue;
        const auto t = axis.index_of(mids[w]);
        if (!t) continue;
        sum[*t] += v;
        ++n[*t];
    }
    std::vector<double> out(axis.length, kMissing);
    for (std::size_t t = 0; t < axis.length; ++t)
        if (n[t]) out[t] = sum[t] / static_cast<double>(n[t]);
    return out;
}

TimeAxis week_axis(const std::vector<MonthIndex>& mids) {
    if (mids.empty()) throw InsufficientData("no weekly values");
    const auto [lo, hi] = std::minmax_element(mids.begin(), mids.end());
    return TimeAxis::spanning({*lo, *hi});
}

std::vector<MonthIndex> midpoints(const std::vector<WeekKey>& weeks) {
    std::vector<MonthIndex> mids;
    mids.reserve(weeks.size());
    for (const auto& w : weeks) mids.push_back(w.midpoint_month());
    return mids;
}

} // namespace

MonthIndex WeekKey::midpoint_month() const {
    if (week < 1 || week > 53) throw Error("week of year out of range: " + std::to_string(week));
    return month_of_day(year, 7 * (week - 1) + 1 + 3);
}

void WeeklySeries::validate() const {
    if (weeks.size() != values.size()) throw Error("weekly series keys and values differ in length");
    for (const auto& w : weeks)
        if (w.week < 1 || w.week > 53) throw Error("week of year out of range: " + std::to_string(w.week));
}

MonthlySeries weekly_to_monthly(const WeeklySeries& w) {
    w.validate();
    const auto mids = midpoints(w.weeks);
    const TimeAxis axis = week_axis(mids);
    MonthlySeries monthly(axis, monthly_means(w.weeks, mids, axis, [&](std::size_t k) { return w.values[k]; }));
    if (monthly.count_present() < 2) throw InsufficientData("fewer than two months carry weekly values");
    return fill_gaps_linear(monthly);
}

GriddedSeries weekly_to_monthly(const WeeklyField& w) {
    const std::size_t cells = w.grid.cells();
    if (w.values.size() != w.weeks.size() * cells) throw Error("weekly field values do not match (week, lat, lon)");
    for (const auto& k : w.weeks)
        if (k.week < 1 || k.week > 53) throw Error("week of year out of range: " + std::to_string(k.week));
    const auto mids = midpoints(w.weeks);
    const TimeAxis axis = week_axis(mids);
    GriddedSeries out(w.grid, axis);
    parallel_for(cells, [&](std::size_t c) {
        MonthlySeries s(axis, monthly_means(w.weeks, mids, axis, [&](std::size_t k) { return w.values[k * cells + c]; }));
        if (s.count_present() < 2) return;
        s = fill_gaps_linear(s);
        for (std::size_t t = 0; t < axis.length; ++t) out.values[t * cells + c] = s.values[t];
    });
    return out;
}

void IrrigationFraction::validate() const {
    if (gw_fraction.size() != grid.cells() || total_equipped.size() != grid.cells())
        throw Error("irrigation fractions do not match grid");
    auto check = [](double v) {
        if (!is_missing(v) && !(v >= 0.0 && v <= 100.0)) throw Error("irrigation fraction outside [0, 100]");
    };
    std::for_each(gw_fraction.begin(), gw_fraction.end(), check);
    std::for_each(total_equipped.begin(), total_equipped.end(), check);
}

IrrigationMasks irrigation_masks(const IrrigationFraction& f, double gw_threshold, double rainfed_threshold) {
    f.validate();
    if (!(gw_threshold > 0.0 && gw_threshold < 100.0) || !(rainfed_threshold > 0.0 && rainfed_threshold < 100.0))
        throw Error("irrigation thresholds must lie in (0, 100)");
    std::vector<int> gw(f.grid.cells()), rainfed(f.grid.cells());
    for (std::size_t c = 0; c < f.grid.cells(); ++c) {
        const double g = f.gw_fraction[c];
        const double tot = f.total_equipped[c];
        const bool is_gw = !is_missing(g) && g > gw_threshold;
        gw[c] = is_missing(g) ? CategoricalGrid::kNoClass : (is_gw ? 1 : 0);
        rainfed[c] = is_missing(tot) ? CategoricalGrid::kNoClass : (!is_gw && tot < rainfed_threshold ? 1 : 0);
    }
    return {{f.grid, std::move(gw)}, {f.grid, std::move(rainfed)}};
}

int Season::calendar_year(int season_year, int month) const {
    return month >= months.front() ? season_year : season_year + 1;
}

SeasonalSeries seasonal_mean(const MonthlySeries& s, const Season& season) {
    if (season.months.empty()) throw Error("season has no months");
    SeasonalSeries out;
    out.label = season.label;
    for (int y = s.axis.start.year - 1; y <= s.axis.last().year; ++y) {
        double sum = 0.0;
        bool complete = true;
        bool any_missing = false;
        for (int m : season.months) {
            const MonthIndex mi{season.calendar_year(y, m), m};
            if (!s.axis.contains(mi)) {
                complete = false;
                break;
            }
            const double v = s.at(mi);
            if (is_missing(v)) any_missing = true;
            sum += v;
        }
        if (!complete) continue;
        out.years.push_back(y);
        out.values.push_back(any_missing ? kMissing : sum / static_cast<double>(season.months.size()));
    }
    return out;
}

MonthlySeries accumulated_ndvi(const MonthlySeries& ndvi_anomaly, const TimeAxis& target_axis, std::size_t k) {
    if (k < 1) throw Error("NDVI accumulation must be at least 1 month");
    const MonthIndex need = target_axis.start.plus(-static_cast<std::int64_t>(k) + 1);
    if (ndvi_anomaly.axis.start > need || ndvi_anomaly.axis.last() < target_axis.last())
        throw InsufficientData("insufficient NDVI history: " + std::to_string(k) + "-month accumulation needs NDVI from " +
                               need.str() + " to " + target_axis.last().str());
    const MonthlySeries history = ndvi_anomaly.slice({need, target_axis.last()});
    return accumulate(history, k).slice(target_axis.range());
}

ExpandingCorrelation ndvi_gwsa_coupling(const MonthlySeries& ndvi_anomaly, const MonthlySeries& gwsa, std::size_t k,
                                        const WindowScheme& w) {
    const MonthlySeries acc = accumulated_ndvi(ndvi_anomaly, gwsa.axis, k);
    return expanding_median_r(gwsa.values, acc.values, w);
}

namespace {

SeasonalSeries stratum_series(const GriddedSeries& ndvi, const CategoricalGrid& stratum, const RegionMask& regions,
                              const std::string& region, const Season& season) {
    std::vector<std::string> labels(regions.grid.cells());
    bool any = false;
    for (std::size_t c = 0; c < labels.size(); ++c)
        if (regions.membership[c] == region && stratum.classes[c] == 1) {
            labels[c] = region;
            any = true;
        }
    if (!any) {
        auto out = seasonal_mean(MonthlySeries::missing(ndvi.axis), season);
        out.label = season.label;
        return out;
    }
    const RegionMask sub(regions.grid, std::move(labels), regions.weights);
    return seasonal_mean(regional_mean(ndvi, sub, region), season);
}

} // namespace

StratifiedSeasonal irrigated_vs_rainfed_ndvi(const GriddedSeries& ndvi, const IrrigationMasks& masks,
                                             const RegionMask& regions, const std::string& region, const Season& season) {
    if (!masks.gw_irrigated.grid.same_as(ndvi.grid) || !masks.non_irrigated.grid.same_as(ndvi.grid) ||
        !regions.grid.same_as(ndvi.grid))
        throw Error("irrigation masks and regions must lie on the NDVI grid");
    if (!regions.has_region(region)) throw Error("unknown region: " + region);
    return {stratum_series(ndvi, masks.gw_irrigated, regions, region, season),
            stratum_series(ndvi, masks.non_irrigated, regions, region, season)};
}

RegionMask project_regions(const RegionMask& regions, const Grid2D& target) {
    std::vector<std::string> labels(target.cells());
    for (std::size_t i = 0; i < target.nlat; ++i)
        for (std::size_t j = 0; j < target.nlon; ++j) {
            try {
                const auto c = nearest_cell(regions.grid, target.lat(i), target.lon(j));
                labels[target.flat(i, j)] = regions.membership[regions.grid.flat(c.i, c.j)];
            } catch (const Error&) {
                // outside the region grid
            }
        }
    return {target, std::move(labels)};
}

} // namespace gwd
