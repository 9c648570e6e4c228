#include "gwdrought/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gwdrought/rng.hpp"

namespace gwd {

MonthlySeries gen_ar1(std::size_t n, double phi, double sd, std::uint64_t seed, MonthIndex start) {
    if (!(std::abs(phi) < 1.0)) throw Error("AR(1) coefficient must satisfy |phi| < 1");
    if (n < 1) throw Error("AR(1) length must be at least 1");
    const CounterRng rng(seed);
    std::vector<double> x(n);
    x[0] = sd * rng.normal(0) / std::sqrt(1.0 - phi * phi);
    for (std::size_t t = 1; t < n; ++t) x[t] = phi * x[t - 1] + sd * rng.normal(t);
    return {TimeAxis(start, n), std::move(x)};
}

void BucketModelConfig::validate() const {
    if (!(recharge_coeff >= 0.0 && recharge_coeff <= 1.0)) throw Error("recharge coefficient must lie in [0, 1]");
    if (!(decay >= 0.0 && decay < 1.0)) throw Error("decay must lie in [0, 1)");
    for (double p : pumping)
        if (!(p >= 0.0)) throw Error("pumping must be non-negative");
    if (!(noise_sd >= 0.0)) throw Error("noise sd must be non-negative");
}

MonthlySeries gen_bucket(const BucketModelConfig& cfg, const MonthlySeries& precip) {
    cfg.validate();
    const CounterRng rng(cfg.seed);
    MonthlySeries storage = MonthlySeries::missing(precip.axis, "mm");
    double s = cfg.init_storage;
    for (std::size_t t = 0; t < precip.size(); ++t) {
        const double p = is_missing(precip.values[t]) ? 0.0 : precip.values[t];
        const double pump = t < cfg.pumping.size() ? cfg.pumping[t] : 0.0;
        const double noise = cfg.noise_sd > 0.0 ? cfg.noise_sd * rng.normal(t) : 0.0;
        s = (1.0 - cfg.decay) * s + cfg.recharge_coeff * p - pump + noise;
        storage.values[t] = s;
    }
    return remove_climatology(storage, monthly_climatology(storage, storage.axis.range()));
}

MonthlySeries gen_lagged_target(const MonthlySeries& precip, std::size_t k_true, double noise_sd, std::uint64_t seed) {
    if (k_true < 1 || k_true >= precip.size()) throw Error("lagged target needs 1 <= k_true < precipitation length");
    MonthlySeries target = standardize(accumulate(precip, k_true));
    if (noise_sd > 0.0) {
        const CounterRng rng(seed);
        for (std::size_t t = 0; t < target.size(); ++t)
            if (!is_missing(target.values[t])) target.values[t] += noise_sd * rng.normal(t);
    }
    target.units = "standardized";
    return target;
}

namespace {

/// Monsoon-shaped monthly climatology, mm.
double precip_climatology(int month) {
    static constexpr double kClim[12] = {15, 12, 14, 18, 35, 140, 260, 240, 160, 60, 20, 12};
    return kClim[month - 1];
}

/// Seasonal greenness shape in [0, 1] for irrigated (double cropping) and
/// rainfed (kharif only) land.
double greenness(int month, bool irrigated) {
    static constexpr double kIrrigated[12] = {0.9, 1.0, 0.7, 0.3, 0.1, 0.2, 0.5, 0.8, 1.0, 0.7, 0.4, 0.6};
    static constexpr double kRainfed[12] = {0.1, 0.1, 0.05, 0.0, 0.0, 0.1, 0.4, 0.8, 1.0, 0.6, 0.3, 0.15};
    return irrigated ? kIrrigated[month - 1] : kRainfed[month - 1];
}

enum Stream : std::uint64_t {
    kPrecipRegion = 100,
    kPrecipCell = 200,
    kCellNoise = 300,
    kSoil = 400,
    kSwsMember = 500,
    kTarget = 600,
    kWellNoise = 700,
    kNdviNoise = 800,
    kNdviDriver = 900,
    kIrrigation = 1000,
};

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) { return splitmix64(seed ^ splitmix64(stream)); }

} // namespace

MonthlySeries gen_precip(const TimeAxis& axis, std::uint64_t seed) {
    const CounterRng rng(seed);
    std::vector<double> v(axis.length);
    for (std::size_t t = 0; t < axis.length; ++t) {
        const double c = precip_climatology(axis.at(t).month);
        v[t] = std::max(0.0, c + 0.3 * c * rng.normal(t));
    }
    return {axis, std::move(v), "mm"};
}

SyntheticScenario build_scenario(std::uint64_t seed) {
    SyntheticScenario sc;
    sc.seed = seed;
    const std::vector<std::string> names = {"SI", "NCI", "NWI"};
    const Grid2D grid(10.5, 75.5, 1.0, 1.0, 3, 2);
    std::vector<std::string> labels(grid.cells());
    for (std::size_t i = 0; i < grid.nlat; ++i)
        for (std::size_t j = 0; j < grid.nlon; ++j) labels[grid.flat(i, j)] = names[i];
    sc.regions = RegionMask(grid, labels);

    // Precipitation, 1981-01 onwards so 180-month accumulations reach back
    // before the first well observation.
    const TimeAxis precip_axis = TimeAxis::spanning({{1981, 1}, {2016, 12}});
    sc.precip = GriddedSeries(grid, precip_axis, "mm");
    for (std::size_t i = 0; i < grid.nlat; ++i) {
        const CounterRng regional(stream_seed(seed, kPrecipRegion + i));
        for (std::size_t j = 0; j < grid.nlon; ++j) {
            const CounterRng local(stream_seed(seed, kPrecipCell + grid.flat(i, j)));
            for (std::size_t t = 0; t < precip_axis.length; ++t) {
                const double c = precip_climatology(precip_axis.at(t).month);
                const double z = 0.95 * regional.normal(t) + 0.3122 * local.normal(t);
                sc.precip.at(t, i, j) = std::max(0.0, c + 0.3 * c * z);
            }
        }
    }

    // Regional groundwater storage truth over the well period.
    std::map<std::string, MonthlySeries> regional_gwsa;
    for (std::size_t r = 0; r < names.size(); ++r) {
        const auto& name = names[r];
        const MonthlySeries p = regional_mean(sc.precip, sc.regions, name);
        const MonthlySeries p_anom = remove_climatology(p, monthly_climatology(p, sc.analysis));
        RegionTruth truth;
        MonthlySeries g;
        if (name == "NWI") {
            BucketModelConfig cfg;
            cfg.recharge_coeff = 0.08;
            cfg.decay = 0.01;
            cfg.seed = stream_seed(seed, kTarget + r);
            double mean_p = 0.0;
            for (double v : p.values) mean_p += v;
            mean_p /= static_cast<double>(p.size());
            cfg.init_storage = cfg.recharge_coeff * mean_p / cfg.decay;
            cfg.pumping.assign(p.size(), 0.0);
            const auto ramp_start = *p.axis.index_of({2012, 1});
            for (std::size_t t = ramp_start; t < p.size(); ++t) cfg.pumping[t] = 0.05 * static_cast<double>(t - ramp_start + 1);
            g = gen_bucket(cfg, p);
            truth.construction = "bucket";
            truth.pumping_start = "2012-01";
            truth.ndvi_coupling_sign = -1;
        } else {
            const std::size_t k = name == "SI" ? 18 : 105;
            const double amplitude = name == "SI" ? 80.0 : 120.0;
            g = gen_lagged_target(p_anom, k, 0.05, stream_seed(seed, kTarget + r));
            for (auto& v : g.values) v *= amplitude;
            truth.construction = "lagged";
            truth.k_true = k;
            truth.ndvi_coupling_sign = name == "SI" ? 1 : 0;
        }
        g.units = "mm";
        regional_gwsa[name] = g.slice(sc.wells_period);
        sc.truth[name] = truth;
    }

    // Cell GWSA over the well period = regional truth + cell noise.
    const TimeAxis wells_axis = TimeAxis::spanning(sc.wells_period);
    GriddedSeries cell_gwsa(grid, wells_axis, "mm");
    for (std::size_t i = 0; i < grid.nlat; ++i)
        for (std::size_t j = 0; j < grid.nlon; ++j) {
            const CounterRng noise(stream_seed(seed, kCellNoise + grid.flat(i, j)));
            const auto& reg = regional_gwsa[names[i]];
            for (std::size_t t = 0; t < wells_axis.length; ++t) cell_gwsa.at(t, i, j) = reg.values[t] + 4.0 * noise.normal(t);
        }

    // GRACE-like fields over the analysis period.
    const TimeAxis grace_axis = TimeAxis::spanning(sc.analysis);
    const auto grace_offset = *wells_axis.index_of(sc.analysis.first);
    sc.gwsa = GriddedSeries(grid, grace_axis, "mm");
    for (std::size_t t = 0; t < grace_axis.length; ++t)
        for (std::size_t c = 0; c < grid.cells(); ++c)
            sc.gwsa.values[t * grid.cells() + c] = cell_gwsa.values[(t + grace_offset) * grid.cells() + c];

    const MonthlySeries soil = gen_ar1(grace_axis.length, 0.7, 10.0, stream_seed(seed, kSoil), grace_axis.start);
    for (std::size_t m = 0; m < 3; ++m) {
        const CounterRng member(stream_seed(seed, kSwsMember + m));
        GriddedSeries f(grid, grace_axis, "mm");
        for (std::size_t t = 0; t < grace_axis.length; ++t) {
            const double seasonal = 40.0 * std::sin(2.0 * std::numbers::pi * (grace_axis.at(t).month - 5) / 12.0);
            for (std::size_t c = 0; c < grid.cells(); ++c)
                f.values[t * grid.cells() + c] = seasonal + soil.values[t] + 5.0 * member.normal(t * grid.cells() + c);
        }
        sc.sws.push_back(std::move(f));
    }
    sc.grace_gaps = {{2002, 6}, {2002, 7}, {2003, 6}, {2011, 10}, {2012, 5}};
    sc.twsa = GriddedSeries(grid, grace_axis, "mm");
    for (std::size_t x = 0; x < sc.twsa.values.size(); ++x) {
        double mean = 0.0;
        for (const auto& f : sc.sws) mean += f.values[x];
        sc.twsa.values[x] = sc.gwsa.values[x] + mean / static_cast<double>(sc.sws.size());
    }
    for (const auto& gap : sc.grace_gaps) {
        const auto t = *grace_axis.index_of(gap);
        for (std::size_t c = 0; c < grid.cells(); ++c) sc.twsa.values[t * grid.cells() + c] = kMissing;
    }

    // Wells: three per region, observed in Jan, May, Aug and Nov.
    static constexpr int kObsMonths[4] = {1, 5, 8, 11};
    static constexpr double kSeasonalDepth[4] = {0.2, 1.0, -0.4, -0.6};
    const double specific_yield[3] = {0.03, 0.12, 0.10};
    const double offsets[3][2] = {{-0.2, -0.3}, {0.1, 0.2}, {0.3, 0.7}};
    for (std::size_t i = 0; i < grid.nlat; ++i)
        for (std::size_t s = 0; s < 3; ++s) {
            StationRecord st;
            st.id = names[i] + "-W" + std::to_string(s + 1);
            st.lat = grid.lat(i) + offsets[s][0];
            st.lon = grid.lon(0) + offsets[s][1];
            st.specific_yield = specific_yield[i];
            const auto cell = nearest_cell(grid, st.lat, st.lon);
            const CounterRng noise(stream_seed(seed, kWellNoise + i * 8 + s));
            const double base_depth = 6.0 + 3.0 * static_cast<double>(s) + 2.0 * static_cast<double>(i);
            std::uint64_t draw = 0;
            for (int y = sc.wells_period.first.year; y <= sc.wells_period.last.year; ++y)
                for (int q = 0; q < 4; ++q) {
                    const MonthIndex m{y, kObsMonths[q]};
                    const double g = cell_gwsa.at(*wells_axis.index_of(m), cell.i, cell.j);
                    const double level =
                        base_depth + kSeasonalDepth[q] - g / (1000.0 * st.specific_yield) + 0.02 * noise.normal(draw++);
                    st.observations.push_back({m, level});
                }
            sc.stations.push_back(std::move(st));
        }

    // Irrigation fractions and weekly NDVI on a 0.25-degree grid.
    const Grid2D fine(grid.lat0 - 0.375, grid.lon0 - 0.375, 0.25, 0.25, grid.nlat * 4, grid.nlon * 4);
    sc.irrigation.grid = fine;
    sc.irrigation.gw_fraction.resize(fine.cells());
    sc.irrigation.total_equipped.resize(fine.cells());
    const CounterRng irr(stream_seed(seed, kIrrigation));
    std::vector<bool> irrigated(fine.cells());
    for (std::size_t c = 0; c < fine.cells(); ++c) {
        irrigated[c] = irr.uniform(3 * c) < 0.6;
        const double gw = irrigated[c] ? 65.0 + 30.0 * irr.uniform(3 * c + 1) : 10.0 * irr.uniform(3 * c + 1);
        sc.irrigation.gw_fraction[c] = gw;
        sc.irrigation.total_equipped[c] = std::min(100.0, gw + (irrigated[c] ? 5.0 : 8.0) * irr.uniform(3 * c + 2));
    }

    const TimeAxis ndvi_axis = TimeAxis::spanning({{1999, 1}, {2016, 12}});
    for (std::size_t r = 0; r < names.size(); ++r) {
        const auto& name = names[r];
        MonthlySeries driver = MonthlySeries::missing(ndvi_axis);
        const int sign = sc.truth[name].ndvi_coupling_sign;
        if (sign != 0) {
            const MonthlySeries zg = standardize(regional_gwsa[name]);
            for (std::size_t t = 0; t < ndvi_axis.length; ++t) driver.values[t] = 0.04 * sign * zg.at(ndvi_axis.at(t));
        } else {
            const auto noise = gen_ar1(ndvi_axis.length, 0.5, 0.03, stream_seed(seed, kNdviDriver + r), ndvi_axis.start);
            driver.values = noise.values;
        }
        sc.ndvi_signal[name] = driver;
    }

    sc.ndvi_weekly.grid = fine;
    for (int y = ndvi_axis.start.year; y <= ndvi_axis.last().year; ++y)
        for (int w = 1; w <= 52; ++w) sc.ndvi_weekly.weeks.push_back({y, w});
    const CounterRng ndvi_noise(stream_seed(seed, kNdviNoise));
    sc.ndvi_weekly.values.resize(sc.ndvi_weekly.weeks.size() * fine.cells());
    for (std::size_t w = 0; w < sc.ndvi_weekly.weeks.size(); ++w) {
        const MonthIndex m = sc.ndvi_weekly.weeks[w].midpoint_month();
        for (std::size_t c = 0; c < fine.cells(); ++c) {
            const std::size_t region_row = (c / fine.nlon) / 4;
            const double d = sc.ndvi_signal[names[region_row]].at(m);
            const double v = irrigated[c] ? 0.35 + 0.2 * greenness(m.month, true) + d
                                          : 0.2 + 0.1 * greenness(m.month, false);
            sc.ndvi_weekly.values[w * fine.cells() + c] = v + 0.01 * ndvi_noise.normal(w * fine.cells() + c);
        }
    }
    return sc;
}

} // namespace gwd
