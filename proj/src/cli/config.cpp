#include <charconv>
#include <fstream>
#include <sstream>

#include "gwdrought/cli.hpp"
#include "gwdrought/io.hpp"

namespace gwd::cli {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty()) out.push_back(t);
    return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
    T x{};
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size()) throw Error("config key '" + key + "': invalid number '" + v + "'");
    return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw Error("config key '" + key + "': expected true or false, got '" + v + "'");
}

fs::path resolve(const fs::path& base, const std::string& v) {
    const fs::path p(v);
    return p.is_absolute() || base.empty() ? p : base / p;
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
    return s;
}

std::string fmt(double v) { return io::format_real(v); }

std::string relative_to(const std::optional<fs::path>& p, const fs::path& base) {
    if (!p) return {};
    if (base.empty()) return p->generic_string();
    const auto rel = p->lexically_relative(base);
    return rel.empty() ? p->generic_string() : rel.generic_string();
}

} // namespace

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, const fs::path& base) {
    const std::string v = trim(value);
    auto path_or_none = [&]() -> std::optional<fs::path> {
        if (v.empty()) return std::nullopt;
        return resolve(base, v);
    };
    if (key == "precip") cfg.precip = path_or_none();
    else if (key == "twsa") cfg.twsa = path_or_none();
    else if (key == "wells") cfg.wells = path_or_none();
    else if (key == "ndvi") cfg.ndvi = path_or_none();
    else if (key == "irrigation") cfg.irrigation = path_or_none();
    else if (key == "regions") cfg.regions = path_or_none();
    else if (key == "sws") {
        cfg.sws.clear();
        for (const auto& s : split_list(v)) cfg.sws.push_back(resolve(base, s));
    } else if (key == "baseline") cfg.baseline = MonthRange::parse(v);
    else if (key == "K") cfg.K = parse_number<std::size_t>(key, v);
    else if (key == "initial_window") cfg.initial_window = parse_number<std::size_t>(key, v);
    else if (key == "well_initial_window") cfg.well_initial_window = parse_number<std::size_t>(key, v);
    else if (key == "alpha") cfg.alpha = parse_number<double>(key, v);
    else if (key == "runs") cfg.runs = parse_number<std::size_t>(key, v);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, v);
    else if (key == "out") cfg.out = resolve(base, v);
    else if (key == "periods") {
        cfg.periods.clear();
        for (const auto& s : split_list(v)) cfg.periods.push_back(MonthRange::parse(s));
    } else if (key == "ndvi_k") {
        cfg.ndvi_k.clear();
        for (const auto& s : split_list(v)) cfg.ndvi_k.push_back(parse_number<std::size_t>(key, s));
    } else if (key == "min_run") cfg.min_run = parse_number<int>(key, v);
    else if (key == "early") cfg.early = MonthRange::parse(v);
    else if (key == "late") cfg.late = MonthRange::parse(v);
    else if (key == "gw_threshold") cfg.gw_threshold = parse_number<double>(key, v);
    else if (key == "rainfed_threshold") cfg.rainfed_threshold = parse_number<double>(key, v);
    else if (key == "gate") cfg.gate = parse_bool(key, v);
    else if (key == "per_cell") cfg.per_cell = parse_bool(key, v);
    else if (key == "weighting") {
        if (v == "area") cfg.weighting = Weighting::area;
        else if (v == "uniform") cfg.weighting = Weighting::uniform;
        else throw Error("config key 'weighting': expected area or uniform, got '" + v + "'");
    } else if (key == "max_lag") cfg.max_lag = parse_number<std::size_t>(key, v);
    else if (key == "threads") cfg.threads = parse_number<std::size_t>(key, v);
    else throw Error("unknown config key '" + key + "'");
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw io::MissingInput(path);
    RunConfig cfg;
    const fs::path base = path.parent_path();
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw io::FormatError(path, row, "expected key = value");
        try {
            apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1), base);
        } catch (const io::FormatError&) {
            throw;
        } catch (const Error& e) {
            throw io::FormatError(path, row, e.what());
        }
    }
    return cfg;
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries(const fs::path& base) const {
    std::vector<std::string> sws_list, period_list, k_list;
    for (const auto& p : sws) sws_list.push_back(relative_to(p, base));
    for (const auto& p : periods) period_list.push_back(p.str());
    for (auto k : ndvi_k) k_list.push_back(std::to_string(k));
    return {
        {"precip", relative_to(precip, base)},
        {"twsa", relative_to(twsa, base)},
        {"sws", join(sws_list)},
        {"wells", relative_to(wells, base)},
        {"ndvi", relative_to(ndvi, base)},
        {"irrigation", relative_to(irrigation, base)},
        {"regions", relative_to(regions, base)},
        {"baseline", baseline.str()},
        {"K", std::to_string(K)},
        {"initial_window", std::to_string(initial_window)},
        {"well_initial_window", std::to_string(well_initial_window)},
        {"alpha", fmt(alpha)},
        {"runs", std::to_string(runs)},
        {"seed", std::to_string(seed)},
        {"out", relative_to(out, base)},
        {"periods", join(period_list)},
        {"ndvi_k", join(k_list)},
        {"min_run", std::to_string(min_run)},
        {"early", early.str()},
        {"late", late.str()},
        {"gw_threshold", fmt(gw_threshold)},
        {"rainfed_threshold", fmt(rainfed_threshold)},
        {"gate", gate ? "true" : "false"},
        {"per_cell", per_cell ? "true" : "false"},
        {"weighting", weighting == Weighting::area ? "area" : "uniform"},
        {"max_lag", std::to_string(max_lag)},
    };
}

std::string render_config(const RunConfig& cfg, const fs::path& base) {
    std::string s;
    for (const auto& [k, v] : cfg.entries(base)) s += k + " = " + v + "\n";
    return s;
}

void RunConfig::validate() const {
    if (K < 1) throw Error("K must be at least 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must lie in (0, 1)");
    if (runs < 1) throw Error("runs must be at least 1");
    if (min_run < 1) throw Error("min_run must be at least 1");
    if (initial_window < 3 || well_initial_window < 3) throw Error("initial windows must hold at least 3 samples");
    if (!(gw_threshold > 0.0 && gw_threshold < 100.0) || !(rainfed_threshold > 0.0 && rainfed_threshold < 100.0))
        throw Error("irrigation thresholds must lie in (0, 100)");
    for (auto k : ndvi_k)
        if (k < 1) throw Error("ndvi_k entries must be at least 1");
}

} // namespace gwd::cli
