// synth and oracle commands, flag parsing and exit-code mapping.

#include <CLI11.hpp>
#include <iostream>
#include <thread>

#include "common.hpp"
#include "gwdrought/oracle.hpp"
#include "gwdrought/parallel.hpp"
#include "gwdrought/synth.hpp"

namespace gwd::cli {

using namespace detail;

void cmd_synth(const RunConfig& cfg) {
    const SyntheticScenario sc = build_scenario(cfg.seed);
    const fs::path& dir = cfg.out;
    fs::create_directories(dir);

    RunConfig scenario = cfg;
    scenario.precip = dir / "precip.csv";
    scenario.twsa = dir / "twsa.csv";
    scenario.sws.clear();
    for (std::size_t m = 0; m < sc.sws.size(); ++m) {
        scenario.sws.push_back(dir / ("sws_" + std::to_string(m + 1) + ".csv"));
        io::write_gridded_csv(scenario.sws.back(), sc.sws[m]);
    }
    scenario.wells = dir / "wells.csv";
    scenario.ndvi = dir / "ndvi_weekly.csv";
    scenario.irrigation = dir / "irrigation.csv";
    scenario.regions = dir / "regions.csv";
    scenario.out = dir / "results";

    io::write_gridded_csv(*scenario.precip, sc.precip);
    io::write_gridded_csv(*scenario.twsa, sc.twsa);
    io::write_stations_csv(*scenario.wells, sc.stations);
    io::write_weekly_csv(*scenario.ndvi, sc.ndvi_weekly);
    io::write_irrigation_csv(*scenario.irrigation, sc.irrigation);
    io::write_region_mask_csv(*scenario.regions, sc.regions);
    io::write_gridded_csv(dir / "gwsa_truth.csv", sc.gwsa);
    io::write_text(dir / "scenario.cfg", "# synthetic scenario '" + sc.label + "', seed " + std::to_string(sc.seed) + "\n" +
                                             render_config(scenario, dir));

    json truth;
    truth["label"] = sc.label;
    truth["seed"] = sc.seed;
    truth["analysis"] = sc.analysis.str();
    truth["wells_period"] = sc.wells_period.str();
    truth["grace_gaps"] = json::array();
    for (const auto& m : sc.grace_gaps) truth["grace_gaps"].push_back(m.str());
    for (const auto& [name, t] : sc.truth) {
        json r;
        r["construction"] = t.construction;
        r["k_true"] = t.k_true > 0 ? json(t.k_true) : json(nullptr);
        r["pumping_start"] = t.pumping_start.empty() ? json(nullptr) : json(t.pumping_start);
        r["ndvi_coupling_sign"] = t.ndvi_coupling_sign;
        truth["regions"][name] = r;
    }
    write_json(dir / "truth.json", truth);
}

bool cmd_oracle(const RunConfig& cfg) {
    oracle::SuiteOptions opt;
    if (cfg.seed != 0) opt.seed = cfg.seed;
    const auto report = oracle::run_suite(oracle::Targets::production(), opt);
    json j;
    j["seed"] = opt.seed;
    j["cases_per_op"] = opt.cases;
    j["passed"] = report.passed();
    j["checks"] = json::array();
    for (const auto& c : report.checks) {
        json cj{{"op", c.op}, {"cases", c.cases}, {"max_abs_dev", c.max_abs_dev}, {"tolerance", c.tolerance}, {"passed", c.passed}};
        cj["failing_seed"] = c.passed ? json(nullptr) : json(c.failing_seed);
        j["checks"].push_back(cj);
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.op << "  cases=" << c.cases << "  max|d|=" << c.max_abs_dev
                  << "  tol=" << c.tolerance;
        if (!c.passed) std::cout << "  seed=" << c.failing_seed;
        std::cout << '\n';
    }
    write_json(cfg.out / "oracle" / "oracle_report.json", j);
    return report.passed();
}

int run(int argc, char** argv) {
    CLI::App app{"Groundwater drought analysis toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::vector<std::string> overrides;
    bool per_cell = false;
    app.add_option("--config", config_path, "key=value configuration file");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads (0 = all cores); never changes results");
    app.add_option("--set", overrides, "override a config key, KEY=VALUE")->take_all();
    app.add_flag("--per-cell", per_cell, "optimal-period: also write the per-cell grid");

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"anomaly", "GWSA from GRACE and/or wells, plus regional series"},
        {"optimal-period", "precipitation accumulation profiles and optimal periods"},
        {"drought", "drought events, areal extent and summaries"},
        {"ndvi-prep", "monthly NDVI, irrigation masks and seasonal strata"},
        {"attribute", "NDVI coupling and relative importance"},
        {"report", "plot-ready tables and figure series with a manifest"},
        {"synth", "write the synthetic scenario"},
        {"oracle", "check production kernels against brute-force oracles"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw Error("--set expects KEY=VALUE, got '" + kv + "'");
            apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1), {});
        }
        if (seed) cfg.seed = *seed;
        if (!out_dir.empty()) cfg.out = out_dir;
        if (threads) cfg.threads = *threads;
        if (per_cell) cfg.per_cell = true;
        cfg.validate();
        const std::size_t n = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
        set_thread_count(static_cast<int>(n));

        if (command == "anomaly") cmd_anomaly(cfg);
        else if (command == "optimal-period") cmd_optimal_period(cfg);
        else if (command == "drought") cmd_drought(cfg);
        else if (command == "ndvi-prep") cmd_ndvi_prep(cfg);
        else if (command == "attribute") cmd_attribute(cfg);
        else if (command == "report") cmd_report(cfg);
        else if (command == "synth") cmd_synth(cfg);
        else if (command == "oracle") return cmd_oracle(cfg) ? kOk : kUsage;
        return kOk;
    } catch (const io::MissingInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kMissingInput;
    } catch (const io::FormatError& e) {
        std::cerr << "error: format error at " << e.what() << '\n';
        return kFormatError;
    } catch (const InsufficientData& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInsufficientData;
    } catch (const MissingArtifact& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kMissingArtifact;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
}

} // namespace gwd::cli
