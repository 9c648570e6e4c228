#include "gwdrought/anomaly.hpp"

#include <algorithm>
#include <cmath>

namespace gwd {

void StationRecord::validate() const {
    if (!(specific_yield > 0.0 && specific_yield < 1.0))
        throw Error("station " + id + ": specific yield must lie in (0, 1)");
    for (std::size_t i = 1; i < observations.size(); ++i)
        if (!(observations[i - 1].month < observations[i].month))
            throw Error("station " + id + ": observation months must be strictly increasing");
}

Climatology monthly_climatology(const MonthlySeries& s, const MonthRange& baseline) {
    if (!s.axis.contains(baseline.first) || !s.axis.contains(baseline.last))
        throw Error("baseline " + baseline.str() + " lies outside series axis " + s.axis.range().str());
    std::array<double, 12> sum{};
    std::array<std::size_t, 12> n{};
    const auto lo = *s.axis.index_of(baseline.first);
    const auto hi = *s.axis.index_of(baseline.last);
    for (std::size_t t = lo; t <= hi; ++t) {
        const double v = s.values[t];
        if (is_missing(v)) continue;
        const auto m = static_cast<std::size_t>(s.axis.at(t).month - 1);
        sum[m] += v;
        ++n[m];
    }
    Climatology c;
    c.baseline = baseline;
    for (std::size_t m = 0; m < 12; ++m) c.mean[m] = n[m] ? sum[m] / static_cast<double>(n[m]) : kMissing;
    return c;
}

MonthlySeries remove_climatology(const MonthlySeries& s, const Climatology& c) {
    MonthlySeries out = s;
    for (std::size_t t = 0; t < s.size(); ++t) out.values[t] = s.values[t] - c.of(s.axis.at(t));
    return out;
}

MonthlySeries standardize(const MonthlySeries& s) {
    double sum = 0.0;
    std::size_t n = 0;
    for (double v : s.values)
        if (!is_missing(v)) {
            sum += v;
            ++n;
        }
    if (n < 2) throw Error("degenerate series: fewer than two values");
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : s.values)
        if (!is_missing(v)) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0.0)) throw Error("degenerate series: zero variance");

    MonthlySeries out = s;
    out.units = "standardized";
    for (auto& v : out.values) v = (v - mean) / sd;
    return out;
}

MonthlySeries accumulate(const MonthlySeries& s, std::size_t k) {
    if (k < 1 || k > s.size())
        throw Error("accumulation length " + std::to_string(k) + " outside [1, " + std::to_string(s.size()) + "]");
    auto out = MonthlySeries::missing(s.axis, s.units);
    // Index of the most recent missing month at or before t; a window is
    // complete when that index falls before the window start.
    std::ptrdiff_t last_missing = -1;
    for (std::size_t t = 0; t < s.size(); ++t) {
        if (is_missing(s.values[t])) last_missing = static_cast<std::ptrdiff_t>(t);
        if (t + 1 < k) continue;
        const std::size_t lo = t + 1 - k;
        if (last_missing >= static_cast<std::ptrdiff_t>(lo)) continue;
        double sum = 0.0;
        for (std::size_t u = lo; u <= t; ++u) sum += s.values[u];
        out.values[t] = sum;
    }
    return out;
}

GriddedSeries grace_gwsa(const GriddedSeries& twsa, std::span<const GriddedSeries> sws) {
    if (sws.empty()) throw Error("at least one surface water storage member is required");
    for (const auto& m : sws)
        if (!m.grid.same_as(twsa.grid) || !(m.axis == twsa.axis))
            throw Error("surface water storage member grid/axis does not match TWSA");

    GriddedSeries out(twsa.grid, twsa.axis, twsa.units);
    for (std::size_t x = 0; x < twsa.values.size(); ++x) {
        const double total = twsa.values[x];
        if (is_missing(total)) continue;
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& m : sws) {
            const double v = m.values[x];
            if (is_missing(v)) continue;
            sum += v;
            ++n;
        }
        if (n > 0) out.values[x] = total - sum / static_cast<double>(n);
    }
    return out;
}

MonthlySeries well_gwsa(const StationRecord& st, const MonthRange& baseline) {
    st.validate();
    if (st.observations.empty()) throw InsufficientData("station " + st.id + " has no observations");

    std::array<double, 12> sum{};
    std::array<std::size_t, 12> n{};
    for (const auto& o : st.observations) {
        if (!baseline.contains(o.month) || is_missing(o.level_m_bgl)) continue;
        const auto m = static_cast<std::size_t>(o.month.month - 1);
        sum[m] += o.level_m_bgl;
        ++n[m];
    }

    const TimeAxis axis = TimeAxis::spanning({st.observations.front().month, st.observations.back().month});
    auto out = MonthlySeries::missing(axis, "mm");
    for (const auto& o : st.observations) {
        const auto m = static_cast<std::size_t>(o.month.month - 1);
        if (n[m] == 0) continue;
        const double anomaly_m = o.level_m_bgl - sum[m] / static_cast<double>(n[m]);
        out.values[*axis.index_of(o.month)] = -anomaly_m * 1000.0 * st.specific_yield;
    }
    return out;
}

GriddedSeries well_field(std::span<const StationRecord> stations, const Grid2D& grid, const MonthRange& baseline) {
    if (stations.empty()) throw InsufficientData("no stations supplied");

    std::vector<MonthlySeries> series;
    std::vector<std::size_t> cell;
    MonthIndex first = stations.front().observations.empty() ? baseline.first : stations.front().observations.front().month;
    MonthIndex last = first;
    for (const auto& st : stations) {
        CellIndex c;
        try {
            c = nearest_cell(grid, st.lat, st.lon);
        } catch (const Error&) {
            continue;
        }
        if (st.observations.empty()) continue;
        series.push_back(well_gwsa(st, baseline));
        cell.push_back(grid.flat(c.i, c.j));
        first = std::min(first, series.back().axis.start);
        last = std::max(last, series.back().axis.last());
    }
    if (series.empty()) throw InsufficientData("no station falls inside the grid");

    const TimeAxis axis = TimeAxis::spanning({first, last});
    std::vector<double> sum(axis.length * grid.cells(), 0.0);
    std::vector<std::size_t> n(sum.size(), 0);
    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto offset = static_cast<std::size_t>(months_between(axis.start, series[s].axis.start));
        for (std::size_t t = 0; t < series[s].size(); ++t) {
            const double v = series[s].values[t];
            if (is_missing(v)) continue;
            const std::size_t x = (offset + t) * grid.cells() + cell[s];
            sum[x] += v;
            ++n[x];
        }
    }
    GriddedSeries out(grid, axis, "mm");
    for (std::size_t x = 0; x < sum.size(); ++x)
        if (n[x] > 0) out.values[x] = sum[x] / static_cast<double>(n[x]);
    return out;
}

} // namespace gwd
