#include "common.hpp"

#include <fstream>

#include "gwdrought/anomaly.hpp"

namespace gwd::cli::detail {

const fs::path& require_input(const std::optional<fs::path>& p, const std::string& key) {
    if (!p) throw io::MissingInput("<config key '" + key + "' not set>");
    if (!fs::exists(*p)) throw io::MissingInput(*p);
    return *p;
}

const fs::path& require_artifact(const fs::path& path, const std::string& command) {
    if (!fs::exists(path)) throw MissingArtifact(path, command);
    return path;
}

fs::path anomaly_dir(const RunConfig& cfg) { return cfg.out / "anomaly"; }
fs::path optimal_dir(const RunConfig& cfg) { return cfg.out / "optimal_period"; }
fs::path drought_dir(const RunConfig& cfg) { return cfg.out / "drought"; }
fs::path ndvi_dir(const RunConfig& cfg) { return cfg.out / "ndvi"; }
fs::path attribute_dir(const RunConfig& cfg) { return cfg.out / "attribute"; }
fs::path report_dir(const RunConfig& cfg) { return cfg.out / "report"; }

fs::path regional_series_path(const RunConfig& cfg, const std::string& series, const std::string& region) {
    return anomaly_dir(cfg) / "regional" / (series + "_" + region + ".csv");
}

fs::path optimal_json_path(const RunConfig& cfg, const std::string& route, const std::string& method,
                           const std::string& region) {
    return optimal_dir(cfg) / ("optimal_" + route + "_" + method + "_" + region + ".json");
}

std::vector<std::string> region_names(const RunConfig& cfg) {
    std::ifstream in(require_artifact(anomaly_dir(cfg) / "regions.txt", "anomaly"));
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) out.push_back(line);
    return out;
}

std::vector<std::string> available_routes(const RunConfig& cfg) {
    std::vector<std::string> out;
    for (const auto& r : kRoutes)
        if (fs::exists(anomaly_dir(cfg) / ("gwsa_" + r + ".csv"))) out.push_back(r);
    if (out.empty()) throw MissingArtifact(anomaly_dir(cfg) / "gwsa_grace.csv", "anomaly");
    return out;
}

MonthlySeries accumulated_precip(const MonthlySeries& precip_anomaly, std::size_t k, const TimeAxis& axis) {
    const MonthIndex need = axis.start.plus(-static_cast<std::int64_t>(k) + 1);
    if (precip_anomaly.axis.start > need)
        throw InsufficientData("insufficient precipitation history for " + std::to_string(k) +
                               "-month accumulation: need precipitation from " + need.str());
    if (precip_anomaly.axis.last() < axis.last())
        throw InsufficientData("precipitation ends " + precip_anomaly.axis.last().str() + ", need data through " +
                               axis.last().str());
    return accumulate(precip_anomaly, k).slice(axis.range());
}

std::size_t chosen_k(const json& optimal) {
    if (!optimal.at("k_star").is_null()) return optimal.at("k_star").get<std::size_t>();
    return optimal.at("strongest").at("k").get<std::size_t>();
}

json read_json(const fs::path& path) {
    try {
        return json::parse(io::read_text(path));
    } catch (const json::parse_error& e) {
        throw io::FormatError(path, 1, e.what());
    }
}

void write_json(const fs::path& path, const json& j) { io::write_text(path, j.dump(2) + "\n"); }

json real(double v) { return is_missing(v) ? json(nullptr) : json(v); }

json event_json(const DroughtEvent& e) {
    return {{"start", e.start.str()},
            {"end", e.end.str()},
            {"duration_inclusive", e.duration},
            {"duration_exclusive", e.duration_exclusive()},
            {"peak_departure_mm", e.peak_departure},
            {"peak_month", e.peak_month.str()},
            {"persistent", e.persistent}};
}

void write_events_csv(const fs::path& path, const DroughtCatalog& cat) {
    std::string s = "series_id,start,end,duration_inclusive,duration_exclusive,peak_departure_mm,peak_month,persistent\n";
    for (const auto& e : cat.events)
        s += cat.series_id + "," + e.start.str() + "," + e.end.str() + "," + std::to_string(e.duration) + "," +
             std::to_string(e.duration_exclusive()) + "," + io::format_real(e.peak_departure) + "," + e.peak_month.str() +
             "," + (e.persistent ? "true" : "false") + "\n";
    io::write_text(path, s);
}

std::string range_tag(const MonthRange& r) { return r.first.str() + "_" + r.last.str(); }

} // namespace gwd::cli::detail
