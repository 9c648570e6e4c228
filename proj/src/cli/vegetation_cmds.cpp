// ndvi-prep and attribute commands.

#include <sstream>

#include "common.hpp"
#include "gwdrought/anomaly.hpp"
#include "gwdrought/attribution.hpp"
#include "gwdrought/optimal_period.hpp"
#include "gwdrought/vegetation.hpp"

namespace gwd::cli {

using namespace detail;

namespace {

void write_seasonal_csv(const fs::path& path, const StratifiedSeasonal& s) {
    std::ostringstream out;
    out << "season_year,stratum,value\n";
    const std::pair<const char*, const SeasonalSeries*> strata[] = {{"gw_irrigated", &s.gw_irrigated},
                                                                    {"non_irrigated", &s.non_irrigated}};
    for (const auto& [name, series] : strata)
        for (std::size_t y = 0; y < series->years.size(); ++y)
            out << series->years[y] << ',' << name << ',' << io::format_real(series->values[y]) << '\n';
    io::write_text(path, out.str());
}

fs::path ndvi_anomaly_path(const RunConfig& cfg, const std::string& region) {
    return ndvi_dir(cfg) / ("ndvi_anom_" + region + ".csv");
}

json importance_json(const PeriodAttribution& pa, const std::string& region, const std::string& route, std::size_t ndvi_k,
                     std::size_t precip_k, const RunConfig& cfg) {
    json j;
    j["period"] = pa.period.str();
    j["region"] = region;
    j["route"] = route;
    j["ndvi_k"] = ndvi_k;
    j["precip_k"] = precip_k;
    if (!pa.result) {
        j["predictors"] = json::array();
        j["model_r2"] = nullptr;
        j["runs"] = cfg.runs;
        j["alpha"] = cfg.alpha;
        j["seed"] = cfg.seed;
        j["error"] = pa.error;
        return j;
    }
    const auto& ri = *pa.result;
    j["predictors"] = json::array();
    for (const auto& p : ri.predictors)
        j["predictors"].push_back({{"name", p.name}, {"share", p.share}, {"ci_low", p.ci_low}, {"ci_high", p.ci_high}});
    j["model_r2"] = ri.model_r2;
    j["runs"] = ri.runs;
    j["alpha"] = ri.alpha;
    j["seed"] = ri.seed;
    return j;
}

} // namespace

void cmd_ndvi_prep(const RunConfig& cfg) {
    const GriddedSeries precip = io::read_gridded_csv(require_input(cfg.precip, "precip"));
    const WeeklyField weekly = io::read_weekly_csv(require_input(cfg.ndvi, "ndvi"));
    const IrrigationFraction irr = io::read_irrigation_csv(require_input(cfg.irrigation, "irrigation"));
    const RegionMask coarse_regions = io::read_region_mask_csv(require_input(cfg.regions, "regions"), precip.grid);
    if (!irr.grid.same_as(weekly.grid)) throw io::FormatError(*cfg.irrigation, 2, "irrigation grid differs from the NDVI grid");

    const fs::path dir = ndvi_dir(cfg);
    fs::create_directories(dir);
    const GriddedSeries monthly = weekly_to_monthly(weekly);
    io::write_gridded_csv(dir / "ndvi_monthly_fine.csv", monthly);

    const IrrigationMasks masks = irrigation_masks(irr, cfg.gw_threshold, cfg.rainfed_threshold);
    io::write_categorical_csv(dir / "mask_gw_irrigated.csv", masks.gw_irrigated);
    io::write_categorical_csv(dir / "mask_non_irrigated.csv", masks.non_irrigated);

    const GriddedSeries coarse =
        block_mean_resample(monthly, precip.grid, &masks.gw_irrigated, 1, cfg.gate ? 0.5 : 0.0);
    io::write_gridded_csv(dir / "ndvi_gw_irrigated_coarse.csv", coarse);

    const RegionMask fine_regions = project_regions(coarse_regions, monthly.grid);
    for (const auto& r : coarse_regions.regions()) {
        const MonthlySeries raw = regional_mean(coarse, coarse_regions, r, cfg.weighting);
        io::write_series_csv(dir / ("ndvi_" + r + ".csv"), raw);
        MonthlySeries anom = MonthlySeries::missing(raw.axis);
        if (raw.count_present() > 0) anom = remove_climatology(raw, monthly_climatology(raw, cfg.baseline));
        io::write_series_csv(ndvi_anomaly_path(cfg, r), anom);
        for (const auto& season : {Season::kharif(), Season::rabi()})
            write_seasonal_csv(dir / ("seasonal_" + season.label + "_" + r + ".csv"),
                               irrigated_vs_rainfed_ndvi(monthly, masks, fine_regions, r, season));
    }
}

void cmd_attribute(const RunConfig& cfg) {
    const auto regions = region_names(cfg);
    // NDVI analyses follow the gridded GRACE route; wells only stand in when it is absent.
    auto routes = available_routes(cfg);
    routes.resize(1);
    const fs::path dir = attribute_dir(cfg);
    fs::create_directories(dir);
    for (const auto& route : routes) {
        const WindowScheme scheme =
            route == "grace" ? WindowScheme::monthly(cfg.initial_window) : WindowScheme::wells(cfg.well_initial_window);
        for (const auto& r : regions) {
            const auto gwsa = io::read_series_csv(require_artifact(regional_series_path(cfg, "gwsa_" + route, r), "anomaly"));
            const auto precip = io::read_series_csv(require_artifact(regional_series_path(cfg, "precip", r), "anomaly"));
            const auto ndvi = io::read_series_csv(require_artifact(ndvi_anomaly_path(cfg, r), "ndvi-prep"));
            const json opt = read_json(require_artifact(optimal_json_path(cfg, route, "median", r), "optimal-period"));
            const std::size_t precip_k = chosen_k(opt);
            const MonthlySeries ppt = accumulated_precip(precip, precip_k, gwsa.axis);

            json coupling;
            coupling["region"] = r;
            coupling["route"] = route;
            coupling["entries"] = json::array();
            for (const std::size_t k : cfg.ndvi_k) {
                const auto c = ndvi_gwsa_coupling(ndvi, gwsa, k, scheme);
                const MonthlySeries acc = accumulated_ndvi(ndvi, gwsa.axis, k);
                std::size_t n = 0;
                for (std::size_t t = 0; t < acc.size(); ++t)
                    if (!is_missing(acc.values[t]) && !is_missing(gwsa.values[t])) ++n;
                double full_r = kMissing, full_p = kMissing;
                if (n >= 3) {
                    try {
                        full_r = pearson_r(acc.values, gwsa.values);
                        full_p = corr_p_value(full_r, n);
                    } catch (const InsufficientData&) {
                        throw;
                    } catch (const Error&) {
                        // constant series: no correlation
                    }
                }
                coupling["entries"].push_back({{"ndvi_k", k},
                                               {"median_r", real(c.median_r)},
                                               {"median_p", real(c.median_p)},
                                               {"full_r", real(full_r)},
                                               {"full_p", real(full_p)},
                                               {"r_sd", real(sample_sd(c.window_r))},
                                               {"n_windows", c.window_r.size()}});

                const DesignBuilder build = [&](const MonthRange& period) {
                    const std::vector<NamedSeries> preds{{"PPT", ppt}, {"NDVI", acc}};
                    return make_design(gwsa, preds, period);
                };
                for (const auto& pa : subperiod_compare(build, cfg.periods, cfg.runs, cfg.alpha, cfg.seed))
                    write_json(dir / ("attribution_" + route + "_" + r + "_" + range_tag(pa.period) + "_ndvi" +
                                      std::to_string(k) + ".json"),
                               importance_json(pa, r, route, k, precip_k, cfg));
            }
            coupling["precip_k"] = precip_k;
            write_json(dir / ("coupling_" + route + "_" + r + ".json"), coupling);
        }
    }
}

} // namespace gwd::cli
