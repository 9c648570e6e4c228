// anomaly, optimal-period and drought commands.

#include <sstream>

#include "common.hpp"
#include "gwdrought/anomaly.hpp"
#include "gwdrought/optimal_period.hpp"
#include "gwdrought/parallel.hpp"

namespace gwd::cli {

using namespace detail;

namespace {

GriddedSeries remove_cell_climatology(const GriddedSeries& f, const MonthRange& baseline) {
    GriddedSeries out = f;
    const auto& g = f.grid;
    parallel_for(g.cells(), [&](std::size_t c) {
        const std::size_t i = c / g.nlon, j = c % g.nlon;
        const MonthlySeries s = f.cell_series(i, j);
        if (s.count_present() == 0) return;
        out.set_cell_series(i, j, remove_climatology(s, monthly_climatology(s, baseline)));
    });
    return out;
}

void write_regional(const RunConfig& cfg, const GriddedSeries& field, const RegionMask& mask, const std::string& series) {
    for (const auto& r : mask.regions())
        io::write_series_csv(regional_series_path(cfg, series, r), regional_mean(field, mask, r, cfg.weighting));
}

void write_profile_csv(const fs::path& path, const CorrelationProfile& p) {
    std::ostringstream s;
    s << "k,median_r,median_p,n_windows,r_sd\n";
    for (const auto& e : p.entries)
        s << e.k << ',' << io::format_real(e.median_r) << ',' << io::format_real(e.median_p) << ',' << e.n_windows << ','
          << io::format_real(e.r_sd) << '\n';
    io::write_text(path, s.str());
}

json optimal_json(const std::string& region, const std::string& route, const OptimalPeriodResult& res,
                  const RunConfig& cfg) {
    json j;
    j["region"] = region;
    j["route"] = route;
    if (res.optimum) {
        j["k_star"] = res.optimum->k;
        j["median_r"] = real(res.optimum->median_r);
        j["median_p"] = real(res.optimum->median_p);
        j["r_sd"] = real(res.optimum->r_sd);
    } else {
        j["k_star"] = nullptr;
        j["median_r"] = nullptr;
        j["median_p"] = nullptr;
        j["r_sd"] = nullptr;
    }
    j["method"] = res.method;
    j["status"] = res.significant() ? "significant" : "none";
    j["strongest"] = {{"k", res.strongest.k},
                      {"median_r", real(res.strongest.median_r)},
                      {"median_p", real(res.strongest.median_p)},
                      {"r_sd", real(res.strongest.r_sd)}};
    j["K"] = cfg.K;
    j["alpha"] = cfg.alpha;
    return j;
}

WindowScheme scheme_for(const std::string& route, const RunConfig& cfg) {
    return route == "grace" ? WindowScheme::monthly(cfg.initial_window) : WindowScheme::wells(cfg.well_initial_window);
}

} // namespace

void cmd_anomaly(const RunConfig& cfg) {
    const GriddedSeries precip = io::read_gridded_csv(require_input(cfg.precip, "precip"));
    const fs::path& regions_path = require_input(cfg.regions, "regions");
    const RegionMask precip_mask = io::read_region_mask_csv(regions_path, precip.grid);
    if (!cfg.twsa && !cfg.wells) throw io::MissingInput("<config keys 'twsa' and 'wells' both unset>");

    const fs::path dir = anomaly_dir(cfg);
    fs::create_directories(dir / "regional");
    for (const auto& route : kRoutes) fs::remove(dir / ("gwsa_" + route + ".csv"));

    if (cfg.twsa) {
        const GriddedSeries twsa = io::read_gridded_csv(require_input(cfg.twsa, "twsa"));
        if (cfg.sws.empty()) throw io::MissingInput("<config key 'sws' not set>");
        std::vector<GriddedSeries> sws;
        for (const auto& p : cfg.sws) {
            sws.push_back(io::read_gridded_csv(require_input(p, "sws")));
            if (!sws.back().grid.same_as(twsa.grid)) throw io::FormatError(p, 2, "grid differs from the twsa grid");
        }
        const GriddedSeries gwsa = remove_cell_climatology(grace_gwsa(twsa, sws), cfg.baseline);
        io::write_gridded_csv(dir / "gwsa_grace.csv", gwsa);
        write_regional(cfg, gwsa, io::read_region_mask_csv(regions_path, twsa.grid), "gwsa_grace");
    }
    if (cfg.wells) {
        const auto stations = io::read_stations_csv(require_input(cfg.wells, "wells"));
        const GriddedSeries field = well_field(stations, precip.grid, cfg.baseline);
        io::write_gridded_csv(dir / "gwsa_well.csv", field);
        write_regional(cfg, field, precip_mask, "gwsa_well");
    }

    std::string names;
    for (const auto& r : precip_mask.regions()) {
        const MonthlySeries p = regional_mean(precip, precip_mask, r, cfg.weighting);
        io::write_series_csv(regional_series_path(cfg, "precip", r), remove_climatology(p, monthly_climatology(p, cfg.baseline)));
        names += r + "\n";
    }
    io::write_text(dir / "regions.txt", names);
}

void cmd_optimal_period(const RunConfig& cfg) {
    const auto regions = region_names(cfg);
    const auto routes = available_routes(cfg);
    fs::create_directories(optimal_dir(cfg));
    for (const auto& route : routes) {
        const WindowScheme scheme = scheme_for(route, cfg);
        for (const auto& r : regions) {
            const auto target = io::read_series_csv(require_artifact(regional_series_path(cfg, "gwsa_" + route, r), "anomaly"));
            const auto precip = io::read_series_csv(require_artifact(regional_series_path(cfg, "precip", r), "anomaly"));
            const auto median_profile = correlation_profile(target, precip, cfg.K, scheme);
            const auto full_profile = full_series_profile(target, precip, cfg.K);
            for (const auto* p : {&median_profile, &full_profile}) {
                write_profile_csv(optimal_dir(cfg) / ("profile_" + route + "_" + p->method + "_" + r + ".csv"), *p);
                write_json(optimal_json_path(cfg, route, p->method, r), optimal_json(r, route, optimal_period(*p, cfg.alpha), cfg));
            }
        }
    }

    if (!cfg.per_cell || std::find(routes.begin(), routes.end(), "grace") == routes.end()) return;
    const GriddedSeries gwsa = io::read_gridded_csv(anomaly_dir(cfg) / "gwsa_grace.csv");
    const GriddedSeries precip_raw = io::read_gridded_csv(require_input(cfg.precip, "precip"));
    if (!precip_raw.grid.same_as(gwsa.grid)) throw Error("per-cell mode needs precipitation on the GWSA grid");
    const GriddedSeries precip = remove_cell_climatology(precip_raw, cfg.baseline);
    std::ostringstream s;
    s << "lat,lon,k_star,median_r,median_p,r_sd,status\n";
    for (std::size_t i = 0; i < gwsa.grid.nlat; ++i)
        for (std::size_t j = 0; j < gwsa.grid.nlon; ++j) {
            s << io::format_real(gwsa.grid.lat(i)) << ',' << io::format_real(gwsa.grid.lon(j)) << ',';
            const MonthlySeries target = gwsa.cell_series(i, j);
            if (target.count_present() < cfg.initial_window) {
                s << ",,,,none\n";
                continue;
            }
            const auto res = optimal_period(
                correlation_profile(target, precip.cell_series(i, j), cfg.K, WindowScheme::monthly(cfg.initial_window)),
                cfg.alpha);
            if (res.optimum)
                s << res.optimum->k << ',' << io::format_real(res.optimum->median_r) << ','
                  << io::format_real(res.optimum->median_p) << ',' << io::format_real(res.optimum->r_sd) << ",significant\n";
            else
                s << ",,,,none\n";
        }
    io::write_text(optimal_dir(cfg) / "optimal_grace_cells.csv", s.str());
}

void cmd_drought(const RunConfig& cfg) {
    const auto regions = region_names(cfg);
    const auto routes = available_routes(cfg);
    const fs::path dir = drought_dir(cfg);
    fs::create_directories(dir);
    const fs::path& regions_path = require_input(cfg.regions, "regions");

    json summary;
    summary["min_run"] = cfg.min_run;
    summary["early"] = cfg.early.str();
    summary["late"] = cfg.late.str();
    for (const auto& route : routes) {
        GriddedSeries field = io::read_gridded_csv(anomaly_dir(cfg) / ("gwsa_" + route + ".csv"));
        const auto& g = field.grid;
        const GriddedSeries raw = field;
        parallel_for(g.cells(), [&](std::size_t c) {
            const std::size_t i = c / g.nlon, j = c % g.nlon;
            const MonthlySeries s = raw.cell_series(i, j);
            if (s.count_present() >= 2) field.set_cell_series(i, j, fill_gaps_linear(s));
        });
        const DroughtMask mask = drought_mask(field, cfg.min_run);
        const RegionMask region_mask = io::read_region_mask_csv(regions_path, g);

        json route_json;
        for (const auto& r : regions) {
            const auto series = io::read_series_csv(require_artifact(regional_series_path(cfg, "gwsa_" + route, r), "anomaly"));
            const auto cat = detect_events(fill_gaps_linear(series), cfg.min_run, "gwsa_" + route + "_" + r);
            write_events_csv(dir / ("events_" + route + "_" + r + ".csv"), cat);

            json rj;
            rj["series_id"] = cat.series_id;
            rj["n_events"] = cat.events.size();
            rj["latest"] = cat.latest() ? event_json(*cat.latest()) : json(nullptr);
            rj["longest"] = json::array();
            for (const auto& e : cat.longest()) rj["longest"].push_back(event_json(e));
            rj["wettest"] = cat.wettest ? json{{"value_mm", cat.wettest->value}, {"month", cat.wettest->month.str()}} : json(nullptr);
            rj["driest"] = cat.driest ? json{{"value_mm", cat.driest->value}, {"month", cat.driest->month.str()}} : json(nullptr);

            MonthlySeries extent = MonthlySeries::missing(mask.axis, "percent");
            if (region_mask.has_region(r)) extent = areal_extent(mask, region_mask, r, cfg.weighting);
            io::write_series_csv(dir / ("extent_" + route + "_" + r + ".csv"), extent);
            const auto wide = most_widespread(extent);
            rj["most_widespread"] = wide ? json{{"month", wide->month.str()}, {"percent", wide->value}} : json(nullptr);

            try {
                rj["period_change_percent"] = period_change(fill_gaps_linear(series), cfg.early, cfg.late);
            } catch (const InsufficientData&) {
                throw;
            } catch (const Error& e) {
                rj["period_change_percent"] = nullptr;
                rj["period_change_error"] = e.what();
            }

            // Latest drought in the optimally accumulated precipitation, when known.
            const fs::path opt = optimal_json_path(cfg, route, "median", r);
            if (fs::exists(opt)) {
                const std::size_t k = chosen_k(read_json(opt));
                const auto precip = io::read_series_csv(regional_series_path(cfg, "precip", r));
                const auto pcat = detect_events(accumulated_precip(precip, k, series.axis), cfg.min_run,
                                                "precip_k" + std::to_string(k) + "_" + r);
                write_events_csv(dir / ("events_precip_" + route + "_" + r + ".csv"), pcat);
                rj["precip_k"] = k;
                rj["precip_latest"] = pcat.latest() ? event_json(*pcat.latest()) : json(nullptr);
            } else {
                rj["precip_k"] = nullptr;
                rj["precip_latest"] = nullptr;
            }
            route_json[r] = rj;
        }
        summary["routes"][route] = route_json;
    }
    write_json(dir / "drought_summary.json", summary);
}

} // namespace gwd::cli
