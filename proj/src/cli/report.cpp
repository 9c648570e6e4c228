// report: plot-ready tables and series assembled from upstream artifacts.

#include <cstdio>
#include <map>
#include <sstream>

#include "common.hpp"
#include "gwdrought/anomaly.hpp"
#include "gwdrought/drought.hpp"
#include "gwdrought/optimal_period.hpp"

namespace gwd::cli {

using namespace detail;

namespace {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string cell(const json& j) {
    if (j.is_null()) return {};
    if (j.is_number_float()) return io::format_real(j.get<double>());
    if (j.is_string()) return j.get<std::string>();
    if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
    return j.dump();
}

std::string field(const json& obj, const char* key) { return obj.is_object() && obj.contains(key) ? cell(obj.at(key)) : std::string{}; }

/// Collects emitted files for the manifest.
class Emitter {
public:
    explicit Emitter(fs::path dir) : dir_(std::move(dir)) {}

    void write(const std::string& name, const std::string& text) {
        io::write_text(dir_ / name, text);
        files_[name] = text;
    }

    [[nodiscard]] const std::map<std::string, std::string>& files() const { return files_; }
    [[nodiscard]] const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
    std::map<std::string, std::string> files_;
};

/// Data rows of a CSV this tool wrote, split on commas.
std::vector<std::vector<std::string>> csv_rows(const fs::path& path) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(io::read_text(path));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> row;
        std::size_t pos = 0;
        while (true) {
            const auto comma = line.find(',', pos);
            row.push_back(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string data_label(const std::string& route) { return route == "grace" ? "GRACE-PPT" : "WELL-PPT"; }

std::string event_span(const json& e) {
    return e.is_null() ? std::string{} : e.at("start").get<std::string>() + ":" + e.at("end").get<std::string>();
}

void table_s1(Emitter& em, const RunConfig& cfg, const std::vector<std::string>& routes,
              const std::vector<std::string>& regions) {
    std::ostringstream s;
    s << "data,region,median_r,median_p,median_k,median_r_sd,median_status,full_r,full_p,full_k,full_status\n";
    for (const auto& route : routes)
        for (const auto& r : regions) {
            const json m = read_json(require_artifact(optimal_json_path(cfg, route, "median", r), "optimal-period"));
            const json f = read_json(require_artifact(optimal_json_path(cfg, route, "full", r), "optimal-period"));
            s << data_label(route) << ',' << r << ',' << field(m, "median_r") << ',' << field(m, "median_p") << ','
              << field(m, "k_star") << ',' << field(m, "r_sd") << ',' << field(m, "status") << ',' << field(f, "median_r")
              << ',' << field(f, "median_p") << ',' << field(f, "k_star") << ',' << field(f, "status") << '\n';
        }
    em.write("table_s1.csv", s.str());
}

void table_s2_and_figures(Emitter& em, const RunConfig& cfg, const std::vector<std::string>& routes,
                          const std::vector<std::string>& regions) {
    const json summary = read_json(require_artifact(drought_dir(cfg) / "drought_summary.json", "drought"));
    std::ostringstream s2, change, wide;
    s2 << "data,region,precip_k,precip_latest_event,precip_latest_duration,latest_event,latest_duration_inclusive,"
          "latest_duration_exclusive,latest_persistent,longest_events,longest_duration_inclusive,"
          "longest_duration_exclusive,wettest_mm,wettest_month,driest_mm,driest_month\n";
    change << "data,region,early,late,change_percent\n";
    wide << "data,region,month,percent\n";
    for (const auto& route : routes) {
        const json& rj = summary.at("routes").at(route);
        for (const auto& r : regions) {
            const json& e = rj.at(r);
            std::string longest_spans;
            for (const auto& ev : e.at("longest")) longest_spans += (longest_spans.empty() ? "" : " & ") + event_span(ev);
            const json first_longest = e.at("longest").empty() ? json(nullptr) : e.at("longest").front();
            s2 << data_label(route) << ',' << r << ',' << field(e, "precip_k") << ',' << event_span(e.at("precip_latest"))
               << ',' << field(e.at("precip_latest"), "duration_inclusive") << ',' << event_span(e.at("latest")) << ','
               << field(e.at("latest"), "duration_inclusive") << ',' << field(e.at("latest"), "duration_exclusive") << ','
               << field(e.at("latest"), "persistent") << ',' << longest_spans << ','
               << field(first_longest, "duration_inclusive") << ',' << field(first_longest, "duration_exclusive") << ','
               << field(e.at("wettest"), "value_mm") << ',' << field(e.at("wettest"), "month") << ','
               << field(e.at("driest"), "value_mm") << ',' << field(e.at("driest"), "month") << '\n';
            change << data_label(route) << ',' << r << ',' << cfg.early.str() << ',' << cfg.late.str() << ','
                   << field(e, "period_change_percent") << '\n';
            wide << data_label(route) << ',' << r << ',' << field(e.at("most_widespread"), "month") << ','
                 << field(e.at("most_widespread"), "percent") << '\n';

            const auto extent = io::read_series_csv(
                require_artifact(drought_dir(cfg) / ("extent_" + route + "_" + r + ".csv"), "drought"));
            std::ostringstream f3;
            f3 << "month,percent\n";
            for (std::size_t t = 0; t < extent.size(); ++t)
                f3 << extent.axis.at(t).str() << ',' << io::format_real(extent.values[t]) << '\n';
            em.write("fig3_extent_" + route + "_" + r + ".csv", f3.str());
        }
    }
    em.write("table_s2.csv", s2.str());
    em.write("figs3_period_change.csv", change.str());
    em.write("fig3_most_widespread.csv", wide.str());
}

void series_figures(Emitter& em, const RunConfig& cfg, const std::vector<std::string>& routes,
                    const std::vector<std::string>& regions) {
    for (const auto& route : routes)
        for (const auto& r : regions) {
            const auto gwsa = io::read_series_csv(require_artifact(regional_series_path(cfg, "gwsa_" + route, r), "anomaly"));
            const auto precip = io::read_series_csv(require_artifact(regional_series_path(cfg, "precip", r), "anomaly"));
            const json opt = read_json(require_artifact(optimal_json_path(cfg, route, "median", r), "optimal-period"));
            const std::size_t k = chosen_k(opt);

            // Standardized GWSA next to standardized optimally accumulated precipitation.
            const MonthlySeries zg = gwsa.count_present() >= 2 ? standardize(gwsa) : MonthlySeries::missing(gwsa.axis);
            MonthlySeries acc = accumulated_precip(precip, k, gwsa.axis);
            for (std::size_t t = 0; t < acc.size(); ++t)
                if (is_missing(gwsa.values[t])) acc.values[t] = kMissing;
            const MonthlySeries zp = acc.count_present() >= 2 ? standardize(acc) : MonthlySeries::missing(acc.axis);
            std::ostringstream pair;
            pair << "month,gwsa_std,precip_k" << k << "_std\n";
            for (std::size_t t = 0; t < gwsa.size(); ++t)
                if (!is_missing(zg.values[t]))
                    pair << gwsa.axis.at(t).str() << ',' << io::format_real(zg.values[t]) << ','
                         << io::format_real(zp.values[t]) << '\n';
            em.write("fig1c_standardized_" + route + "_" + r + ".csv", pair.str());

            std::vector<double> filled = gwsa.values;
            if (gwsa.count_present() >= 2) filled = fill_gaps_linear(gwsa).values;
            std::ostringstream ac;
            ac << "lag,r\n";
            if (gwsa.count_present() >= 3) {
                const auto rho = autocorrelation({gwsa.axis, filled}, cfg.max_lag);
                for (std::size_t lag = 0; lag < rho.size(); ++lag) ac << lag << ',' << io::format_real(rho[lag]) << '\n';
            }
            em.write("figs2_autocorrelation_" + route + "_" + r + ".csv", ac.str());

            // Median and full-series profile curves side by side.
            const auto med = csv_rows(require_artifact(optimal_dir(cfg) / ("profile_" + route + "_median_" + r + ".csv"), "optimal-period"));
            const auto full = csv_rows(require_artifact(optimal_dir(cfg) / ("profile_" + route + "_full_" + r + ".csv"), "optimal-period"));
            std::ostringstream pc;
            pc << "k,median_r,median_p,r_sd,full_r,full_p\n";
            for (std::size_t i = 0; i < med.size() && i < full.size(); ++i)
                pc << med[i][0] << ',' << med[i][1] << ',' << med[i][2] << ',' << med[i][4] << ',' << full[i][1] << ','
                   << full[i][2] << '\n';
            em.write("fig1b_profile_" + route + "_" + r + ".csv", pc.str());
        }
}

void vegetation_tables(Emitter& em, const RunConfig& cfg, const std::vector<std::string>& routes,
                       const std::vector<std::string>& regions) {
    std::ostringstream s3, s4;
    s3 << "data,region,ndvi_k,median_r,median_p,full_r,full_p,r_sd\n";
    s4 << "data,period,ndvi_k,region,ppt_share,ndvi_share,ppt_ci_low,ndvi_ci_low,ppt_ci_high,ndvi_ci_high,model_r2,"
          "precip_k,status\n";
    if (cfg.ndvi) {
        const std::string route = routes.front();
        for (const auto& r : regions) {
            const json c = read_json(require_artifact(attribute_dir(cfg) / ("coupling_" + route + "_" + r + ".json"), "attribute"));
            for (const auto& e : c.at("entries"))
                s3 << data_label(route) << ',' << r << ',' << field(e, "ndvi_k") << ',' << field(e, "median_r") << ','
                   << field(e, "median_p") << ',' << field(e, "full_r") << ',' << field(e, "full_p") << ','
                   << field(e, "r_sd") << '\n';
        }
        for (const auto& period : cfg.periods)
            for (const auto k : cfg.ndvi_k)
                for (const auto& r : regions) {
                    const json a = read_json(require_artifact(
                        attribute_dir(cfg) / ("attribution_" + route + "_" + r + "_" + range_tag(period) + "_ndvi" +
                                              std::to_string(k) + ".json"),
                        "attribute"));
                    json ppt, ndvi;
                    for (const auto& p : a.at("predictors")) (p.at("name") == "PPT" ? ppt : ndvi) = p;
                    s4 << data_label(route) << ',' << period.str() << ',' << k << ',' << r << ',' << field(ppt, "share")
                       << ',' << field(ndvi, "share") << ',' << field(ppt, "ci_low") << ',' << field(ndvi, "ci_low") << ','
                       << field(ppt, "ci_high") << ',' << field(ndvi, "ci_high") << ',' << field(a, "model_r2") << ','
                       << field(a, "precip_k") << ',' << (a.contains("error") ? "error" : "ok") << '\n';
                }
        for (const auto& r : regions)
            for (const char* season : {"kharif", "rabi"}) {
                const auto rows = csv_rows(require_artifact(
                    ndvi_dir(cfg) / ("seasonal_" + std::string(season) + "_" + r + ".csv"), "ndvi-prep"));
                std::map<std::string, std::pair<std::string, std::string>> by_year;
                for (const auto& row : rows) {
                    auto& slot = by_year[row[0]];
                    (row[1] == "gw_irrigated" ? slot.first : slot.second) = row[2];
                }
                std::ostringstream f4;
                f4 << "season_year,gw_irrigated,non_irrigated\n";
                for (const auto& [year, v] : by_year) f4 << year << ',' << v.first << ',' << v.second << '\n';
                em.write("fig4_ndvi_" + std::string(season) + "_" + r + ".csv", f4.str());
            }
    }
    em.write("table_s3.csv", s3.str());
    em.write("table_s4.csv", s4.str());
}

} // namespace

void cmd_report(const RunConfig& cfg) {
    const auto regions = region_names(cfg);
    const auto routes = available_routes(cfg);
    fs::create_directories(report_dir(cfg));
    fs::remove(report_dir(cfg) / "manifest.json");
    Emitter em(report_dir(cfg));
    table_s1(em, cfg, routes, regions);
    table_s2_and_figures(em, cfg, routes, regions);
    series_figures(em, cfg, routes, regions);
    vegetation_tables(em, cfg, routes, regions);

    json manifest;
    manifest["generator"] = "gwdrought report";
    json params = json::object();
    for (const auto& [k, v] : cfg.entries()) {
        if (k == "out" || k == "threads") continue; // threads never change results
        params[k] = v;
    }
    // Input paths are recorded by file name and checksum so the manifest does
    // not depend on where the run happened.
    json inputs = json::array();
    auto record_input = [&](const std::string& key, const fs::path& p) {
        inputs.push_back({{"key", key}, {"file", p.filename().generic_string()}, {"fnv1a64", hex64(fnv1a64(io::read_text(p)))}});
    };
    for (const auto& [key, p] : {std::pair{"precip", cfg.precip}, {"twsa", cfg.twsa}, {"wells", cfg.wells},
                                 {"ndvi", cfg.ndvi}, {"irrigation", cfg.irrigation}, {"regions", cfg.regions}}) {
        params[key] = p ? p->filename().generic_string() : "";
        if (p && fs::exists(*p)) record_input(key, *p);
    }
    std::string sws_names;
    for (const auto& p : cfg.sws) {
        sws_names += (sws_names.empty() ? "" : ",") + p.filename().generic_string();
        if (fs::exists(p)) record_input("sws", p);
    }
    params["sws"] = sws_names;
    manifest["parameters"] = params;
    manifest["inputs"] = inputs;
    manifest["files"] = json::array();
    for (const auto& [name, text] : em.files())
        manifest["files"].push_back({{"path", name}, {"bytes", text.size()}, {"fnv1a64", hex64(fnv1a64(text))}});
    write_json(report_dir(cfg) / "manifest.json", manifest);
}

} // namespace gwd::cli
