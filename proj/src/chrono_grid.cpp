#include "gwdrought/chrono_grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

namespace gwd {

namespace {

int parse_int(std::string_view text, std::string_view what) {
    int value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) throw Error("invalid " + std::string(what) + ": '" + std::string(text) + "'");
    return value;
}

constexpr double kGeomTol = 1e-9;

bool near_integer(double x, double tol = 1e-6) { return std::abs(x - std::round(x)) <= tol; }

} // namespace

// ---------------------------------------------------------------------------

MonthIndex::MonthIndex(int y, int m) : year(y), month(m) {
    if (m < 1 || m > 12) throw Error("month out of range: " + std::to_string(m));
}

MonthIndex MonthIndex::from_ordinal(std::int64_t ordinal) {
    std::int64_t y = ordinal / 12;
    std::int64_t m = ordinal % 12;
    if (m < 0) {
        m += 12;
        --y;
    }
    return {static_cast<int>(y), static_cast<int>(m) + 1};
}

std::string MonthIndex::str() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
}

MonthIndex MonthIndex::parse(std::string_view text) {
    const auto dash = text.find('-', 1);
    if (dash == std::string_view::npos) throw Error("invalid month '" + std::string(text) + "', expected YYYY-MM");
    return {parse_int(text.substr(0, dash), "year"), parse_int(text.substr(dash + 1), "month")};
}

std::int64_t months_between(const MonthIndex& a, const MonthIndex& b) noexcept { return b.ordinal() - a.ordinal(); }

std::string MonthRange::str() const { return first.str() + ":" + last.str(); }

MonthRange MonthRange::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw Error("invalid month range '" + std::string(text) + "', expected YYYY-MM:YYYY-MM");
    MonthRange r{MonthIndex::parse(text.substr(0, colon)), MonthIndex::parse(text.substr(colon + 1))};
    if (r.last < r.first) throw Error("month range ends before it starts: " + std::string(text));
    return r;
}

TimeAxis::TimeAxis(MonthIndex s, std::size_t n) : start(s), length(n) {
    if (n < 1) throw Error("time axis must have at least one month");
}

TimeAxis TimeAxis::spanning(const MonthRange& r) {
    if (r.last < r.first) throw Error("empty month range " + r.str());
    return {r.first, static_cast<std::size_t>(r.length())};
}

bool TimeAxis::contains(const MonthIndex& m) const noexcept { return index_of(m).has_value(); }

std::optional<std::size_t> TimeAxis::index_of(const MonthIndex& m) const noexcept {
    const auto d = months_between(start, m);
    if (d < 0 || d >= static_cast<std::int64_t>(length)) return std::nullopt;
    return static_cast<std::size_t>(d);
}

// ---------------------------------------------------------------------------

MonthlySeries::MonthlySeries(TimeAxis a, std::vector<double> v, std::string u)
    : axis(a), values(std::move(v)), units(std::move(u)) {
    if (values.size() != axis.length) throw Error("series length does not match its time axis");
}

MonthlySeries MonthlySeries::missing(TimeAxis a, std::string u) {
    return {a, std::vector<double>(a.length, kMissing), std::move(u)};
}

double MonthlySeries::at(const MonthIndex& m) const {
    const auto i = axis.index_of(m);
    return i ? values[*i] : kMissing;
}

std::size_t MonthlySeries::count_present() const noexcept {
    return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](double v) { return !is_missing(v); }));
}

MonthlySeries MonthlySeries::slice(const MonthRange& r) const {
    auto out = MonthlySeries::missing(TimeAxis::spanning(r), units);
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = at(out.axis.at(i));
    return out;
}

// ---------------------------------------------------------------------------

Grid2D::Grid2D(double lat0_, double lon0_, double dlat_, double dlon_, std::size_t nlat_, std::size_t nlon_)
    : lat0(lat0_), lon0(lon0_), dlat(dlat_), dlon(dlon_), nlat(nlat_), nlon(nlon_) {
    if (!(dlat > 0.0) || !(dlon > 0.0)) throw Error("grid spacing must be positive");
    if (nlat < 1 || nlon < 1) throw Error("grid must have at least one cell");
}

bool Grid2D::same_as(const Grid2D& o) const noexcept {
    return nlat == o.nlat && nlon == o.nlon && std::abs(lat0 - o.lat0) < kGeomTol && std::abs(lon0 - o.lon0) < kGeomTol &&
           std::abs(dlat - o.dlat) < kGeomTol && std::abs(dlon - o.dlon) < kGeomTol;
}

GriddedSeries::GriddedSeries(Grid2D g, TimeAxis a, std::string u)
    : grid(g), axis(a), values(a.length * g.cells(), kMissing), units(std::move(u)) {}

GriddedSeries::GriddedSeries(Grid2D g, TimeAxis a, std::vector<double> v, std::string u)
    : grid(g), axis(a), values(std::move(v)), units(std::move(u)) {
    if (values.size() != axis.length * grid.cells()) throw Error("gridded values do not match (time, lat, lon) dimensions");
}

MonthlySeries GriddedSeries::cell_series(std::size_t i, std::size_t j) const {
    std::vector<double> v(axis.length);
    for (std::size_t t = 0; t < axis.length; ++t) v[t] = at(t, i, j);
    return {axis, std::move(v), units};
}

void GriddedSeries::set_cell_series(std::size_t i, std::size_t j, const MonthlySeries& s) {
    if (!(s.axis == axis)) throw Error("cell series axis does not match field axis");
    for (std::size_t t = 0; t < axis.length; ++t) at(t, i, j) = s.values[t];
}

RegionMask::RegionMask(Grid2D g, std::vector<std::string> labels, std::vector<double> w)
    : grid(g), membership(std::move(labels)), weights(std::move(w)) {
    if (membership.size() != grid.cells()) throw Error("region mask does not match grid");
    if (!weights.empty()) {
        if (weights.size() != grid.cells()) throw Error("region weights do not match grid");
        for (double x : weights)
            if (!(x >= 0.0)) throw Error("region weights must be non-negative");
    }
}

std::vector<std::string> RegionMask::regions() const {
    std::vector<std::string> out;
    for (const auto& m : membership)
        if (!m.empty() && std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    return out;
}

bool RegionMask::has_region(std::string_view label) const {
    return !label.empty() && std::find(membership.begin(), membership.end(), label) != membership.end();
}

double RegionMask::weight(std::size_t flat, Weighting mode) const {
    if (mode == Weighting::uniform) return 1.0;
    if (!weights.empty()) return weights[flat];
    const double lat = grid.lat(flat / grid.nlon);
    return std::cos(lat * std::numbers::pi / 180.0);
}

CategoricalGrid::CategoricalGrid(Grid2D g, std::vector<int> c) : grid(g), classes(std::move(c)) {
    if (classes.size() != grid.cells()) throw Error("categorical grid does not match grid");
}

// ---------------------------------------------------------------------------

MonthlySeries regional_mean(const GriddedSeries& field, const RegionMask& mask, std::string_view region, Weighting mode) {
    if (!field.grid.same_as(mask.grid)) throw Error("region mask grid does not match field grid");
    if (!mask.has_region(region)) throw Error("unknown region: " + std::string(region));

    std::vector<std::size_t> members;
    for (std::size_t c = 0; c < mask.membership.size(); ++c)
        if (mask.membership[c] == region) members.push_back(c);

    auto out = MonthlySeries::missing(field.axis, field.units);
    const std::size_t cells = field.grid.cells();
    for (std::size_t t = 0; t < field.axis.length; ++t) {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t c : members) {
            const double v = field.values[t * cells + c];
            if (is_missing(v)) continue;
            const double w = mask.weight(c, mode);
            num += w * v;
            den += w;
        }
        if (den > 0.0) out.values[t] = num / den;
    }
    return out;
}

namespace {

std::size_t nearest_axis_index(double x, double origin, double step, std::size_t n) {
    const double pos = (x - origin) / step;
    const auto guess = static_cast<std::int64_t>(std::floor(pos));
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::int64_t k = guess - 1; k <= guess + 2; ++k) {
        if (k < 0 || k >= static_cast<std::int64_t>(n)) continue;
        const double d = std::abs(x - (origin + static_cast<double>(k) * step));
        if (d < best_d) {
            best_d = d;
            best = static_cast<std::size_t>(k);
        }
    }
    return best;
}

} // namespace

CellIndex nearest_cell(const Grid2D& g, double lat, double lon) {
    const double lat_lo = g.lat0 - g.dlat / 2, lat_hi = g.lat(g.nlat - 1) + g.dlat / 2;
    const double lon_lo = g.lon0 - g.dlon / 2, lon_hi = g.lon(g.nlon - 1) + g.dlon / 2;
    if (!(lat >= lat_lo - kGeomTol && lat <= lat_hi + kGeomTol && lon >= lon_lo - kGeomTol && lon <= lon_hi + kGeomTol))
        throw Error("outside grid: (" + std::to_string(lat) + ", " + std::to_string(lon) + ")");
    // Planar degree distance is separable, so the per-axis minima give the 2-D minimum
    // and the per-axis lower-index tie-break gives "lower i, then lower j".
    return {nearest_axis_index(lat, g.lat0, g.dlat, g.nlat), nearest_axis_index(lon, g.lon0, g.dlon, g.nlon)};
}

Refinement refinement(const Grid2D& fine, const Grid2D& coarse) {
    const double rl = coarse.dlat / fine.dlat;
    const double rn = coarse.dlon / fine.dlon;
    if (!near_integer(rl) || !near_integer(rn) || std::round(rl) < 1 || std::round(rn) < 1)
        throw Error("non-integer refinement ratio between grids");
    Refinement r;
    r.ratio_lat = static_cast<std::size_t>(std::round(rl));
    r.ratio_lon = static_cast<std::size_t>(std::round(rn));
    const double off_lat = ((coarse.lat0 - coarse.dlat / 2) - (fine.lat0 - fine.dlat / 2)) / fine.dlat;
    const double off_lon = ((coarse.lon0 - coarse.dlon / 2) - (fine.lon0 - fine.dlon / 2)) / fine.dlon;
    if (!near_integer(off_lat) || !near_integer(off_lon) || std::round(off_lat) < 0 || std::round(off_lon) < 0)
        throw Error("coarse grid cells are not aligned with fine grid cells");
    r.offset_lat = static_cast<std::size_t>(std::round(off_lat));
    r.offset_lon = static_cast<std::size_t>(std::round(off_lon));
    if (r.offset_lat + coarse.nlat * r.ratio_lat > fine.nlat || r.offset_lon + coarse.nlon * r.ratio_lon > fine.nlon)
        throw Error("coarse grid extends beyond fine grid");
    return r;
}

CategoricalGrid majority_resample(const CategoricalGrid& fine, const Grid2D& coarse) {
    const auto r = refinement(fine.grid, coarse);
    std::vector<int> out(coarse.cells(), CategoricalGrid::kNoClass);
    for (std::size_t I = 0; I < coarse.nlat; ++I) {
        for (std::size_t J = 0; J < coarse.nlon; ++J) {
            std::map<int, std::size_t> counts; // ordered: first max is the smallest label
            for (std::size_t a = 0; a < r.ratio_lat; ++a)
                for (std::size_t b = 0; b < r.ratio_lon; ++b) {
                    const int c = fine.at(r.offset_lat + I * r.ratio_lat + a, r.offset_lon + J * r.ratio_lon + b);
                    if (c != CategoricalGrid::kNoClass) ++counts[c];
                }
            std::size_t best = 0;
            for (const auto& [label, n] : counts)
                if (n > best) {
                    best = n;
                    out[coarse.flat(I, J)] = label;
                }
        }
    }
    return {coarse, std::move(out)};
}

GriddedSeries block_mean_resample(const GriddedSeries& fine, const Grid2D& coarse, const CategoricalGrid* mask,
                                  int keep_class, double min_class_fraction) {
    const auto r = refinement(fine.grid, coarse);
    if (mask && !mask->grid.same_as(fine.grid)) throw Error("mask grid does not match fine grid");

    // Per coarse cell: contributing fine cells.
    std::vector<std::vector<std::size_t>> members(coarse.cells());
    const double block = static_cast<double>(r.ratio_lat * r.ratio_lon);
    for (std::size_t I = 0; I < coarse.nlat; ++I)
        for (std::size_t J = 0; J < coarse.nlon; ++J) {
            auto& m = members[coarse.flat(I, J)];
            for (std::size_t a = 0; a < r.ratio_lat; ++a)
                for (std::size_t b = 0; b < r.ratio_lon; ++b) {
                    const std::size_t fi = r.offset_lat + I * r.ratio_lat + a;
                    const std::size_t fj = r.offset_lon + J * r.ratio_lon + b;
                    if (!mask || mask->at(fi, fj) == keep_class) m.push_back(fine.grid.flat(fi, fj));
                }
            if (static_cast<double>(m.size()) / block <= min_class_fraction) m.clear();
        }

    GriddedSeries out(coarse, fine.axis, fine.units);
    const std::size_t fcells = fine.grid.cells();
    for (std::size_t t = 0; t < fine.axis.length; ++t)
        for (std::size_t c = 0; c < coarse.cells(); ++c) {
            double sum = 0.0;
            std::size_t n = 0;
            for (std::size_t f : members[c]) {
                const double v = fine.values[t * fcells + f];
                if (is_missing(v)) continue;
                sum += v;
                ++n;
            }
            if (n > 0) out.values[t * coarse.cells() + c] = sum / static_cast<double>(n);
        }
    return out;
}

} // namespace gwd
