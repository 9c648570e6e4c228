#include "gwdrought/drought.hpp"

#include <algorithm>
#include <cmath>

#include "gwdrought/parallel.hpp"

namespace gwd {

std::vector<DroughtEvent> DroughtCatalog::longest() const {
    int best = 0;
    for (const auto& e : events) best = std::max(best, e.duration);
    std::vector<DroughtEvent> out;
    for (const auto& e : events)
        if (e.duration == best) out.push_back(e);
    return out;
}

MonthlySeries fill_gaps_linear(const MonthlySeries& s) {
    if (s.count_present() < 2) throw InsufficientData("gap filling needs at least two present values");
    MonthlySeries out = s;
    std::ptrdiff_t prev = -1;
    for (std::size_t t = 0; t < s.size(); ++t) {
        if (is_missing(s.values[t])) continue;
        if (prev >= 0 && t > static_cast<std::size_t>(prev) + 1) {
            const auto lo = static_cast<std::size_t>(prev);
            const double a = s.values[lo];
            const double b = s.values[t];
            const double span = static_cast<double>(t - lo);
            for (std::size_t u = lo + 1; u < t; ++u) out.values[u] = a + (b - a) * (static_cast<double>(u - lo) / span);
        }
        prev = static_cast<std::ptrdiff_t>(t);
    }
    return out;
}

DroughtCatalog detect_events(const MonthlySeries& anomaly, int min_run, std::string series_id) {
    if (min_run < 1) throw Error("minimum run length must be at least 1");
    DroughtCatalog cat;
    cat.series_id = std::move(series_id);
    const auto& v = anomaly.values;
    const std::size_t n = v.size();

    for (std::size_t t = 0; t < n; ++t) {
        if (is_missing(v[t])) continue;
        if (!cat.wettest || v[t] > cat.wettest->value) cat.wettest = Extreme{v[t], anomaly.axis.at(t)};
        if (!cat.driest || v[t] < cat.driest->value) cat.driest = Extreme{v[t], anomaly.axis.at(t)};
    }

    std::size_t t = 0;
    while (t < n) {
        if (is_missing(v[t]) || !(v[t] < 0.0)) {
            ++t;
            continue;
        }
        const std::size_t lo = t;
        std::size_t peak = t;
        while (t < n && !is_missing(v[t]) && v[t] < 0.0) {
            if (v[t] < v[peak]) peak = t;
            ++t;
        }
        const std::size_t len = t - lo;
        if (len >= static_cast<std::size_t>(min_run)) {
            DroughtEvent e;
            e.start = anomaly.axis.at(lo);
            e.end = anomaly.axis.at(t - 1);
            e.duration = static_cast<int>(len);
            e.peak_departure = v[peak];
            e.peak_month = anomaly.axis.at(peak);
            e.persistent = t == n;
            cat.events.push_back(e);
        }
    }
    return cat;
}

DroughtMask drought_mask(const GriddedSeries& field, int min_run) {
    DroughtMask mask{field.grid, field.axis, std::vector<std::uint8_t>(field.values.size(), DroughtMask::kNoDrought)};
    const auto& g = field.grid;
    parallel_for(g.cells(), [&](std::size_t c) {
        const std::size_t i = c / g.nlon, j = c % g.nlon;
        const MonthlySeries s = field.cell_series(i, j);
        const auto cat = detect_events(s, min_run);
        for (std::size_t t = 0; t < s.size(); ++t)
            if (is_missing(s.values[t])) mask.state[field.index(t, i, j)] = DroughtMask::kNoData;
        for (const auto& e : cat.events) {
            const auto lo = *s.axis.index_of(e.start);
            const auto hi = *s.axis.index_of(e.end);
            for (std::size_t t = lo; t <= hi; ++t) mask.state[field.index(t, i, j)] = DroughtMask::kDrought;
        }
    });
    return mask;
}

MonthlySeries areal_extent(const DroughtMask& mask, const RegionMask& regions, std::string_view region, Weighting mode) {
    if (!mask.grid.same_as(regions.grid)) throw Error("region mask grid does not match drought mask grid");
    if (!regions.has_region(region)) throw Error("unknown region: " + std::string(region));
    auto out = MonthlySeries::missing(mask.axis, "percent");
    const std::size_t cells = mask.grid.cells();
    for (std::size_t t = 0; t < mask.axis.length; ++t) {
        double in = 0.0, total = 0.0;
        for (std::size_t c = 0; c < cells; ++c) {
            if (regions.membership[c] != region) continue;
            const auto s = mask.state[t * cells + c];
            if (s == DroughtMask::kNoData) continue;
            const double w = regions.weight(c, mode);
            total += w;
            if (s == DroughtMask::kDrought) in += w;
        }
        if (total > 0.0) out.values[t] = std::clamp(100.0 * in / total, 0.0, 100.0);
    }
    return out;
}

std::optional<Extreme> most_widespread(const MonthlySeries& extent) {
    std::optional<Extreme> best;
    for (std::size_t t = 0; t < extent.size(); ++t) {
        const double v = extent.values[t];
        if (!is_missing(v) && (!best || v > best->value)) best = Extreme{v, extent.axis.at(t)};
    }
    return best;
}

namespace {

double range_mean(const MonthlySeries& s, const MonthRange& r) {
    double sum = 0.0;
    std::size_t n = 0;
    for (auto m = r.first; m <= r.last; m = m.plus(1)) {
        const double v = s.at(m);
        if (is_missing(v)) continue;
        sum += v;
        ++n;
    }
    if (n == 0) throw InsufficientData("no present values in " + r.str());
    return sum / static_cast<double>(n);
}

} // namespace

double period_change(const MonthlySeries& s, const MonthRange& early, const MonthRange& late) {
    const double a = range_mean(s, early);
    const double b = range_mean(s, late);
    if (a == 0.0) throw Error("undefined baseline: early-period mean is zero");
    return 100.0 * (b - a) / std::abs(a);
}

} // namespace gwd
