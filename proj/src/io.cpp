#include "gwdrought/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace gwd::io {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

/// Line-oriented CSV reader with a fixed header.
class CsvReader {
public:
    CsvReader(const fs::path& path, const std::vector<std::string>& header, std::size_t optional_columns = 0)
        : path_(path), in_(path, std::ios::binary) {
        if (!fs::exists(path) || !in_) throw MissingInput(path);
        std::string line;
        if (!std::getline(in_, line)) throw FormatError(path, 1, "empty file, expected header");
        line_no_ = 1;
        const auto got = split(line);
        if (got.size() < header.size() || got.size() > header.size() + optional_columns)
            throw FormatError(path, 1, "unexpected header, expected " + join(header));
        for (std::size_t i = 0; i < header.size(); ++i)
            if (got[i] != header[i]) throw FormatError(path, 1, "unexpected header, expected " + join(header));
        columns_ = got.size();
        for (std::size_t i = header.size(); i < got.size(); ++i) extra_.emplace_back(got[i]);
    }

    /// Next non-blank row; false at end of file.
    bool next() {
        while (std::getline(in_, line_)) {
            ++line_no_;
            if (trim(line_).empty()) continue;
            fields_ = split(line_);
            if (fields_.size() != columns_)
                fail("expected " + std::to_string(columns_) + " fields, found " + std::to_string(fields_.size()));
            return true;
        }
        return false;
    }

    [[nodiscard]] const std::vector<std::string>& extra_columns() const { return extra_; }
    [[nodiscard]] std::size_t row() const { return line_no_; }
    [[nodiscard]] std::string_view text(std::size_t i) const { return fields_[i]; }

    [[nodiscard]] int integer(std::size_t i) const {
        int v = 0;
        const auto f = fields_[i];
        auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc{} || p != f.data() + f.size()) fail("invalid integer '" + std::string(f) + "'");
        return v;
    }

    /// Empty field reads as missing unless `required`.
    [[nodiscard]] double real(std::size_t i, bool required = true) const {
        const auto f = fields_[i];
        if (f.empty()) {
            if (required) fail("missing required value");
            return kMissing;
        }
        double v = 0.0;
        auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc{} || p != f.data() + f.size() || !std::isfinite(v)) fail("invalid number '" + std::string(f) + "'");
        return v;
    }

    [[nodiscard]] MonthIndex month(std::size_t year_col, std::size_t month_col) const {
        const int y = integer(year_col);
        const int m = integer(month_col);
        if (m < 1 || m > 12) fail("month out of range: " + std::to_string(m));
        return {y, m};
    }

    [[noreturn]] void fail(const std::string& what) const { throw FormatError(path_, line_no_, what); }

private:
    static std::string join(const std::vector<std::string>& h) {
        std::string s;
        for (const auto& c : h) s += (s.empty() ? "" : ",") + c;
        return s;
    }

    fs::path path_;
    std::ifstream in_;
    std::string line_;
    std::vector<std::string_view> fields_;
    std::vector<std::string> extra_;
    std::size_t columns_ = 0;
    std::size_t line_no_ = 0;
};

std::vector<double> unique_sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v)
        if (out.empty() || std::abs(x - out.back()) > 1e-9) out.push_back(x);
    return out;
}

/// Origin, spacing, count of a regular axis; spacing `fallback` for a single value.
std::tuple<double, double, std::size_t> regular_axis(const std::vector<double>& u, double fallback, const char* what) {
    if (u.size() == 1) return {u.front(), fallback, 1};
    double step = u[1] - u[0];
    for (std::size_t i = 2; i < u.size(); ++i) step = std::min(step, u[i] - u[i - 1]);
    const double span = (u.back() - u.front()) / step;
    if (std::abs(span - std::round(span)) > 1e-6) throw Error(std::string("irregular ") + what + " coordinates");
    for (double x : u) {
        const double k = (x - u.front()) / step;
        if (std::abs(k - std::round(k)) > 1e-6) throw Error(std::string("irregular ") + what + " coordinates");
    }
    return {u.front(), step, static_cast<std::size_t>(std::round(span)) + 1};
}

std::size_t cell_of(const Grid2D& g, double lat, double lon, const CsvReader& rd) {
    CellIndex c;
    try {
        c = nearest_cell(g, lat, lon);
    } catch (const Error& e) {
        rd.fail(e.what());
    }
    if (std::abs(g.lat(c.i) - lat) > 1e-6 || std::abs(g.lon(c.j) - lon) > 1e-6) rd.fail("coordinate is not a grid cell center");
    return g.flat(c.i, c.j);
}

template <class Row>
Grid2D grid_from_rows(const std::vector<Row>& rows, const fs::path& path) {
    std::vector<double> lats, lons;
    for (const auto& r : rows) {
        lats.push_back(r.lat);
        lons.push_back(r.lon);
    }
    if (rows.empty()) throw FormatError(path, 1, "no data rows");
    try {
        return infer_grid(std::move(lats), std::move(lons));
    } catch (const FormatError&) {
        throw;
    } catch (const Error& e) {
        throw FormatError(path, 1, e.what());
    }
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

} // namespace

std::string format_real(double v) {
    if (is_missing(v)) return {};
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, p};
}

Grid2D infer_grid(std::vector<double> lats, std::vector<double> lons) {
    const auto ulat = unique_sorted(std::move(lats));
    const auto ulon = unique_sorted(std::move(lons));
    if (ulat.empty() || ulon.empty()) throw Error("no coordinates");
    // A single row or column borrows the other axis' spacing.
    const double lat_guess = ulat.size() > 1 ? ulat[1] - ulat[0] : (ulon.size() > 1 ? ulon[1] - ulon[0] : 1.0);
    const auto [lon0, dlon, nlon] = regular_axis(ulon, lat_guess, "longitude");
    const auto [lat0, dlat, nlat] = regular_axis(ulat, dlon, "latitude");
    return {lat0, lon0, dlat, dlon, nlat, nlon};
}

// ---------------------------------------------------------------------------

namespace {
struct GridRow {
    MonthIndex month;
    double lat, lon, value;
    std::size_t line;
};
} // namespace

GriddedSeries read_gridded_csv(const fs::path& path) {
    CsvReader rd(path, {"year", "month", "lat", "lon", "value"});
    std::vector<GridRow> rows;
    while (rd.next()) rows.push_back({rd.month(0, 1), rd.real(2), rd.real(3), rd.real(4, false), rd.row()});
    const Grid2D grid = grid_from_rows(rows, path);
    MonthIndex lo = rows.front().month, hi = lo;
    for (const auto& r : rows) {
        lo = std::min(lo, r.month);
        hi = std::max(hi, r.month);
    }
    GriddedSeries f(grid, TimeAxis::spanning({lo, hi}));
    std::vector<bool> seen(f.values.size(), false);
    for (const auto& r : rows) {
        const auto c = nearest_cell(grid, r.lat, r.lon);
        const auto x = f.index(*f.axis.index_of(r.month), c.i, c.j);
        if (seen[x]) throw FormatError(path, r.line, "duplicate (month, lat, lon) row");
        seen[x] = true;
        f.values[x] = r.value;
    }
    return f;
}

void write_gridded_csv(const fs::path& path, const GriddedSeries& f) {
    std::ostringstream out;
    out << "year,month,lat,lon,value\n";
    for (std::size_t t = 0; t < f.axis.length; ++t) {
        const auto m = f.axis.at(t);
        for (std::size_t i = 0; i < f.grid.nlat; ++i)
            for (std::size_t j = 0; j < f.grid.nlon; ++j)
                out << m.year << ',' << m.month << ',' << format_real(f.grid.lat(i)) << ',' << format_real(f.grid.lon(j))
                    << ',' << format_real(f.at(t, i, j)) << '\n';
    }
    write_text(path, out.str());
}

MonthlySeries read_series_csv(const fs::path& path) {
    CsvReader rd(path, {"year", "month", "value"});
    std::vector<std::tuple<MonthIndex, double, std::size_t>> rows;
    while (rd.next()) rows.emplace_back(rd.month(0, 1), rd.real(2, false), rd.row());
    if (rows.empty()) throw FormatError(path, 1, "no data rows");
    MonthIndex lo = std::get<0>(rows.front()), hi = lo;
    for (const auto& r : rows) {
        lo = std::min(lo, std::get<0>(r));
        hi = std::max(hi, std::get<0>(r));
    }
    auto s = MonthlySeries::missing(TimeAxis::spanning({lo, hi}));
    std::vector<bool> seen(s.size(), false);
    for (const auto& [m, v, line] : rows) {
        const auto t = *s.axis.index_of(m);
        if (seen[t]) throw FormatError(path, line, "duplicate month " + m.str());
        seen[t] = true;
        s.values[t] = v;
    }
    return s;
}

void write_series_csv(const fs::path& path, const MonthlySeries& s) {
    std::ostringstream out;
    out << "year,month,value\n";
    for (std::size_t t = 0; t < s.size(); ++t) {
        const auto m = s.axis.at(t);
        out << m.year << ',' << m.month << ',' << format_real(s.values[t]) << '\n';
    }
    write_text(path, out.str());
}

std::vector<StationRecord> read_stations_csv(const fs::path& path) {
    CsvReader rd(path, {"well_id", "lat", "lon", "specific_yield", "year", "month", "level_m_bgl"});
    std::vector<StationRecord> out;
    std::map<std::string, std::size_t, std::less<>> index;
    while (rd.next()) {
        const std::string id(rd.text(0));
        if (id.empty()) rd.fail("empty well_id");
        auto it = index.find(id);
        if (it == index.end()) {
            StationRecord st;
            st.id = id;
            st.lat = rd.real(1);
            st.lon = rd.real(2);
            st.specific_yield = rd.real(3);
            if (!(st.specific_yield > 0.0 && st.specific_yield < 1.0)) rd.fail("specific yield must lie in (0, 1)");
            it = index.emplace(id, out.size()).first;
            out.push_back(std::move(st));
        }
        auto& st = out[it->second];
        const MonthIndex m = rd.month(4, 5);
        if (!st.observations.empty() && !(st.observations.back().month < m))
            rd.fail("observation months for well " + id + " must be strictly increasing");
        st.observations.push_back({m, rd.real(6, false)});
    }
    return out;
}

void write_stations_csv(const fs::path& path, const std::vector<StationRecord>& stations) {
    std::ostringstream out;
    out << "well_id,lat,lon,specific_yield,year,month,level_m_bgl\n";
    for (const auto& st : stations)
        for (const auto& o : st.observations)
            out << st.id << ',' << format_real(st.lat) << ',' << format_real(st.lon) << ',' << format_real(st.specific_yield)
                << ',' << o.month.year << ',' << o.month.month << ',' << format_real(o.level_m_bgl) << '\n';
    write_text(path, out.str());
}

RegionMask read_region_mask_csv(const fs::path& path, const Grid2D& grid) {
    CsvReader rd(path, {"lat", "lon", "region"}, 1);
    const bool weighted = !rd.extra_columns().empty();
    if (weighted && rd.extra_columns().front() != "weight") throw FormatError(path, 1, "optional 4th column must be 'weight'");
    std::vector<std::string> labels(grid.cells());
    std::vector<double> weights(weighted ? grid.cells() : 0, 0.0);
    while (rd.next()) {
        const auto c = cell_of(grid, rd.real(0), rd.real(1), rd);
        labels[c] = std::string(rd.text(2));
        if (weighted) {
            const double w = rd.real(3);
            if (w < 0.0) rd.fail("weights must be non-negative");
            weights[c] = w;
        }
    }
    return {grid, std::move(labels), std::move(weights)};
}

void write_region_mask_csv(const fs::path& path, const RegionMask& mask) {
    std::ostringstream out;
    const bool weighted = !mask.weights.empty();
    out << "lat,lon,region" << (weighted ? ",weight" : "") << '\n';
    for (std::size_t i = 0; i < mask.grid.nlat; ++i)
        for (std::size_t j = 0; j < mask.grid.nlon; ++j) {
            const auto c = mask.grid.flat(i, j);
            if (mask.membership[c].empty()) continue;
            out << format_real(mask.grid.lat(i)) << ',' << format_real(mask.grid.lon(j)) << ',' << mask.membership[c];
            if (weighted) out << ',' << format_real(mask.weights[c]);
            out << '\n';
        }
    write_text(path, out.str());
}

namespace {
struct ClassRow {
    double lat, lon;
    int cls;
};
} // namespace

CategoricalGrid read_categorical_csv(const fs::path& path) {
    CsvReader rd(path, {"lat", "lon", "class"});
    std::vector<ClassRow> rows;
    while (rd.next()) rows.push_back({rd.real(0), rd.real(1), rd.text(2).empty() ? CategoricalGrid::kNoClass : rd.integer(2)});
    const Grid2D grid = grid_from_rows(rows, path);
    std::vector<int> classes(grid.cells(), CategoricalGrid::kNoClass);
    for (const auto& r : rows) {
        const auto c = nearest_cell(grid, r.lat, r.lon);
        classes[grid.flat(c.i, c.j)] = r.cls;
    }
    return {grid, std::move(classes)};
}

void write_categorical_csv(const fs::path& path, const CategoricalGrid& g) {
    std::ostringstream out;
    out << "lat,lon,class\n";
    for (std::size_t i = 0; i < g.grid.nlat; ++i)
        for (std::size_t j = 0; j < g.grid.nlon; ++j) {
            const int c = g.at(i, j);
            out << format_real(g.grid.lat(i)) << ',' << format_real(g.grid.lon(j)) << ','
                << (c == CategoricalGrid::kNoClass ? std::string() : std::to_string(c)) << '\n';
        }
    write_text(path, out.str());
}

namespace {
struct WeekRow {
    int year, week;
    double lat, lon, value;
};
} // namespace

WeeklyField read_weekly_csv(const fs::path& path) {
    CsvReader rd(path, {"year", "week", "lat", "lon", "value"});
    std::vector<WeekRow> rows;
    while (rd.next()) {
        WeekRow r{rd.integer(0), rd.integer(1), rd.real(2), rd.real(3), rd.real(4, false)};
        if (r.week < 1 || r.week > 53) rd.fail("week of year out of range");
        rows.push_back(r);
    }
    WeeklyField w;
    w.grid = grid_from_rows(rows, path);
    std::set<std::pair<int, int>> keys;
    for (const auto& r : rows) keys.insert({r.year, r.week});
    std::map<std::pair<int, int>, std::size_t> slot;
    for (const auto& k : keys) {
        slot[k] = w.weeks.size();
        w.weeks.push_back({k.first, k.second});
    }
    w.values.assign(w.weeks.size() * w.grid.cells(), kMissing);
    for (const auto& r : rows) {
        const auto c = nearest_cell(w.grid, r.lat, r.lon);
        w.values[slot[{r.year, r.week}] * w.grid.cells() + w.grid.flat(c.i, c.j)] = r.value;
    }
    return w;
}

void write_weekly_csv(const fs::path& path, const WeeklyField& w) {
    std::ostringstream out;
    out << "year,week,lat,lon,value\n";
    for (std::size_t k = 0; k < w.weeks.size(); ++k)
        for (std::size_t i = 0; i < w.grid.nlat; ++i)
            for (std::size_t j = 0; j < w.grid.nlon; ++j)
                out << w.weeks[k].year << ',' << w.weeks[k].week << ',' << format_real(w.grid.lat(i)) << ','
                    << format_real(w.grid.lon(j)) << ',' << format_real(w.values[k * w.grid.cells() + w.grid.flat(i, j)])
                    << '\n';
    write_text(path, out.str());
}

namespace {
struct IrrRow {
    double lat, lon, gw, total;
};
} // namespace

IrrigationFraction read_irrigation_csv(const fs::path& path) {
    CsvReader rd(path, {"lat", "lon", "gw_fraction", "total_equipped_fraction"});
    std::vector<IrrRow> rows;
    while (rd.next()) {
        IrrRow r{rd.real(0), rd.real(1), rd.real(2, false), rd.real(3, false)};
        for (double v : {r.gw, r.total})
            if (!is_missing(v) && (v < 0.0 || v > 100.0)) rd.fail("fraction outside [0, 100]");
        rows.push_back(r);
    }
    IrrigationFraction f;
    f.grid = grid_from_rows(rows, path);
    f.gw_fraction.assign(f.grid.cells(), kMissing);
    f.total_equipped.assign(f.grid.cells(), kMissing);
    for (const auto& r : rows) {
        const auto c = nearest_cell(f.grid, r.lat, r.lon);
        f.gw_fraction[f.grid.flat(c.i, c.j)] = r.gw;
        f.total_equipped[f.grid.flat(c.i, c.j)] = r.total;
    }
    return f;
}

void write_irrigation_csv(const fs::path& path, const IrrigationFraction& f) {
    std::ostringstream out;
    out << "lat,lon,gw_fraction,total_equipped_fraction\n";
    for (std::size_t i = 0; i < f.grid.nlat; ++i)
        for (std::size_t j = 0; j < f.grid.nlon; ++j) {
            const auto c = f.grid.flat(i, j);
            out << format_real(f.grid.lat(i)) << ',' << format_real(f.grid.lon(j)) << ',' << format_real(f.gw_fraction[c])
                << ',' << format_real(f.total_equipped[c]) << '\n';
        }
    write_text(path, out.str());
}

void write_text(const fs::path& path, std::string_view text) {
    auto out = open_out(path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("failed writing " + path.string());
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingInput(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace gwd::io
