#include <doctest.h>

#include <iostream>
#include <sstream>

#include <json.hpp>

#include "gwdrought/anomaly.hpp"
#include "gwdrought/cli.hpp"
#include "gwdrought/io.hpp"
#include "gwdrought/optimal_period.hpp"
#include "gwdrought/parallel.hpp"
#include "support/tempdir.hpp"

using namespace gwd;
namespace fs = std::filesystem;
using gwd::test::TempDir;
using json = nlohmann::json;

namespace {

struct Result {
    int code;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "gwdrought");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream err, out;
    auto* old_err = std::cerr.rdbuf(err.rdbuf());
    auto* old_out = std::cout.rdbuf(out.rdbuf());
    const int code = cli::run(static_cast<int>(argv.size()), argv.data());
    std::cerr.rdbuf(old_err);
    std::cout.rdbuf(old_out);
    return {code, err.str()};
}

/// Synthetic scenario written once per test run.
const TempDir& scenario() {
    static TempDir dir("cli_scenario");
    static const bool written = [] {
        const auto r = invoke({"--out", dir.path().string(), "--seed", "42", "synth"});
        REQUIRE(r.code == 0);
        return true;
    }();
    (void)written;
    return dir;
}

std::string cfg() { return (scenario().path() / "scenario.cfg").string(); }

Result run_in(const fs::path& out, const std::string& command, std::vector<std::string> extra = {}) {
    std::vector<std::string> args{"--config", cfg(), "--out", out.string(), "--set", "runs=200"};
    args.insert(args.end(), extra.begin(), extra.end());
    args.push_back(command);
    return invoke(args);
}

void run_pipeline(const fs::path& out, std::vector<std::string> extra = {}) {
    for (const char* c : {"anomaly", "optimal-period", "drought", "ndvi-prep", "attribute", "report"}) {
        const auto r = run_in(out, c, extra);
        INFO(c << ": " << r.err);
        REQUIRE(r.code == 0);
    }
}

json load(const fs::path& p) { return json::parse(io::read_text(p)); }

} // namespace

TEST_CASE("config parsing") {
    TempDir dir("cli_cfg");
    io::write_text(dir / "a.cfg",
                   "# comment\nprecip = data/p.csv\nsws = s1.csv, s2.csv\nK = 36\nalpha=0.01\nperiods = 2002-01:2010-12\n"
                   "ndvi_k = 4,12\nweighting = uniform\ngate = true\n");
    const auto c = cli::load_config(dir / "a.cfg");
    CHECK(*c.precip == dir / "data/p.csv");
    CHECK(c.sws.size() == 2);
    CHECK(c.K == 36);
    CHECK(c.alpha == 0.01);
    CHECK(c.periods.size() == 1);
    CHECK(c.ndvi_k == std::vector<std::size_t>{4, 12});
    CHECK(c.weighting == Weighting::uniform);
    CHECK(c.gate);

    const auto again = cli::load_config([&] {
        io::write_text(dir / "b.cfg", cli::render_config(c, dir.path()));
        return dir / "b.cfg";
    }());
    CHECK(again.entries(dir.path()) == c.entries(dir.path()));

    io::write_text(dir / "bad.cfg", "K = many\n");
    CHECK_THROWS_AS(cli::load_config(dir / "bad.cfg"), Error);
    io::write_text(dir / "unknown.cfg", "colour = blue\n");
    CHECK_THROWS_AS(cli::load_config(dir / "unknown.cfg"), Error);
    cli::RunConfig bad;
    bad.alpha = 1.0;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("synth writes a complete scenario") {
    const auto& dir = scenario();
    for (const char* f : {"precip.csv", "twsa.csv", "sws_1.csv", "wells.csv", "ndvi_weekly.csv", "irrigation.csv",
                          "regions.csv", "gwsa_truth.csv", "truth.json", "scenario.cfg"})
        CHECK(fs::exists(dir / f));
    const json truth = load(dir / "truth.json");
    CHECK(truth["regions"]["SI"]["k_true"] == 18);
    CHECK(truth["seed"] == 42);
}

TEST_CASE("full pipeline and output layout") {
    TempDir out("cli_run");
    run_pipeline(out.path());
    const fs::path o = out.path();
    CHECK(fs::exists(o / "anomaly/gwsa_grace.csv"));
    CHECK(fs::exists(o / "anomaly/gwsa_well.csv"));
    CHECK(fs::exists(o / "anomaly/regional/gwsa_grace_SI.csv"));
    CHECK(fs::exists(o / "optimal_period/profile_grace_median_NCI.csv"));
    CHECK(fs::exists(o / "drought/events_grace_NWI.csv"));
    CHECK(fs::exists(o / "ndvi/seasonal_rabi_SI.csv"));
    CHECK(fs::exists(o / "attribute/coupling_grace_NWI.json"));
    CHECK(fs::exists(o / "report/manifest.json"));

    const json si = load(o / "optimal_period/optimal_grace_median_SI.json");
    CHECK(si["k_star"] == 18);
    CHECK(si["status"] == "significant");
    CHECK(load(o / "optimal_period/optimal_grace_median_NCI.json")["k_star"] == 105);

    const json summary = load(o / "drought/drought_summary.json");
    CHECK(summary["routes"]["grace"]["NWI"]["latest"]["persistent"] == true);

    const std::string events = io::read_text(o / "drought/events_grace_SI.csv");
    CHECK(events.rfind("series_id,start,end,duration_inclusive,duration_exclusive,peak_departure_mm,peak_month,persistent\n", 0) == 0);
    // chronological
    std::istringstream lines(events);
    std::string line, prev;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
        const std::string start = line.substr(line.find(',') + 1, 7);
        CHECK(prev <= start);
        prev = start;
    }

    const json a = load(o / "attribute/attribution_grace_NWI_2002-01_2016-12_ndvi12.json");
    CHECK(a["predictors"].size() == 2);
    CHECK(a["predictors"][0]["name"] == "PPT");
    CHECK(a["runs"] == 200);
    CHECK(fs::exists(o / "attribute/attribution_grace_NWI_2002-01_2012-12_ndvi4.json"));

    const json m = load(o / "report/manifest.json");
    CHECK(m["parameters"].contains("K"));
    CHECK_FALSE(m["parameters"].contains("out"));
    for (const auto& f : m["files"]) CHECK(fs::file_size(o / "report" / f["path"].get<std::string>()) == f["bytes"].get<std::size_t>());
}

TEST_CASE("commands are thin shells over the library") {
    TempDir out("cli_thin");
    REQUIRE(run_in(out.path(), "anomaly").code == 0);
    REQUIRE(run_in(out.path(), "optimal-period").code == 0);
    const auto c = cli::load_config(cfg());

    // regional GRACE GWSA from library calls, written with the same writer
    const auto twsa = io::read_gridded_csv(*c.twsa);
    std::vector<GriddedSeries> sws;
    for (const auto& p : c.sws) sws.push_back(io::read_gridded_csv(p));
    GriddedSeries gwsa = grace_gwsa(twsa, sws);
    for (std::size_t i = 0; i < gwsa.grid.nlat; ++i)
        for (std::size_t j = 0; j < gwsa.grid.nlon; ++j) {
            const auto s = gwsa.cell_series(i, j);
            gwsa.set_cell_series(i, j, remove_climatology(s, monthly_climatology(s, c.baseline)));
        }
    const auto mask = io::read_region_mask_csv(*c.regions, gwsa.grid);
    io::write_gridded_csv(out / "direct_grid.csv", gwsa);
    CHECK(io::read_text(out / "direct_grid.csv") == io::read_text(out / "anomaly/gwsa_grace.csv"));
    io::write_series_csv(out / "direct.csv", regional_mean(gwsa, mask, "NCI"));
    CHECK(io::read_text(out / "direct.csv") == io::read_text(out / "anomaly/regional/gwsa_grace_NCI.csv"));

    const auto precip = io::read_series_csv(out / "anomaly/regional/precip_NCI.csv");
    const auto target = io::read_series_csv(out / "anomaly/regional/gwsa_grace_NCI.csv");
    const auto res = optimal_period(correlation_profile(target, precip, c.K, WindowScheme::monthly(c.initial_window)), c.alpha);
    const json j = load(out / "optimal_period/optimal_grace_median_NCI.json");
    REQUIRE(res.optimum);
    CHECK(j["k_star"] == res.optimum->k);
    CHECK(j["median_r"].get<double>() == res.optimum->median_r);
}

TEST_CASE("re-runs are byte-identical") {
    TempDir a("cli_det_a"), b("cli_det_b");
    for (const char* c : {"anomaly", "optimal-period", "drought"}) {
        REQUIRE(run_in(a.path(), c, {"--threads", "1"}).code == 0);
        REQUIRE(run_in(b.path(), c, {"--threads", "3"}).code == 0);
    }
    for (const auto& e : fs::recursive_directory_iterator(a.path())) {
        if (!e.is_regular_file()) continue;
        const fs::path rel = fs::relative(e.path(), a.path());
        INFO(rel.string());
        CHECK(io::read_text(e.path()) == io::read_text(b.path() / rel));
    }
    set_thread_count(1);
}

TEST_CASE("per-cell optimal periods") {
    TempDir out("cli_cells");
    REQUIRE(run_in(out.path(), "anomaly").code == 0);
    REQUIRE(run_in(out.path(), "optimal-period", {"--per-cell", "--set", "K=24"}).code == 0);
    const std::string text = io::read_text(out / "optimal_period/optimal_grace_cells.csv");
    const auto grid = io::read_gridded_csv(out / "anomaly/gwsa_grace.csv").grid;
    CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == grid.cells() + 1);
}

TEST_CASE("exit codes") {
    TempDir out("cli_exit");
    SUBCASE("missing input names the path") {
        io::write_text(out / "c.cfg", "precip = nowhere.csv\nregions = nowhere_r.csv\ntwsa = t.csv\n");
        const auto r = invoke({"--config", (out / "c.cfg").string(), "--out", (out / "o").string(), "anomaly"});
        CHECK(r.code == cli::kMissingInput);
        CHECK(r.err.find("nowhere.csv") != std::string::npos);
    }
    SUBCASE("format error cites the row") {
        fs::copy(scenario().path() / "precip.csv", out / "precip.csv");
        std::string text = io::read_text(out / "precip.csv");
        std::size_t pos = 0;
        for (int line = 0; line < 4; ++line) pos = text.find('\n', pos) + 1;
        text.insert(pos, "2002,x,1,2,3\n");
        io::write_text(out / "precip.csv", text);
        const auto r = invoke({"--config", cfg(), "--set", "precip=" + (out / "precip.csv").string(), "--out",
                            (out / "o").string(), "anomaly"});
        CHECK(r.code == cli::kFormatError);
        CHECK(r.err.find("precip.csv:5:") != std::string::npos);
    }
    SUBCASE("insufficient history names the earliest month") {
        REQUIRE(run_in(out.path(), "anomaly").code == 0);
        const auto r = run_in(out.path(), "optimal-period", {"--set", "K=400"});
        CHECK(r.code == cli::kInsufficientData);
        CHECK(r.err.find("need precipitation from 1968-10") != std::string::npos);
    }
    SUBCASE("missing upstream artifact names the command") {
        const auto r = run_in(out.path(), "optimal-period");
        CHECK(r.code == cli::kMissingArtifact);
        CHECK(r.err.find("run `anomaly` first") != std::string::npos);
        REQUIRE(run_in(out.path(), "anomaly").code == 0);
        const auto rep = run_in(out.path(), "report");
        CHECK(rep.code == cli::kMissingArtifact);
        CHECK(rep.err.find("run `optimal-period` first") != std::string::npos);
    }
    SUBCASE("usage errors") {
        CHECK(invoke({"no-such-command"}).code == cli::kUsage);
        CHECK(invoke({"--set", "K", "anomaly"}).code == cli::kUsage);
    }
}

TEST_CASE("report without NDVI keeps table headers") {
    TempDir out("cli_nondvi");
    for (const char* c : {"anomaly", "optimal-period", "drought", "report"}) REQUIRE(run_in(out.path(), c, {"--set", "ndvi="}).code == 0);
    const std::string s3 = io::read_text(out / "report/table_s3.csv");
    CHECK(std::count(s3.begin(), s3.end(), '\n') == 1);
    const std::string s4 = io::read_text(out / "report/table_s4.csv");
    CHECK(std::count(s4.begin(), s4.end(), '\n') == 1);
}

TEST_CASE("oracle command") {
    TempDir out("cli_oracle");
    const auto r = invoke({"--out", out.path().string(), "oracle"});
    CHECK(r.code == 0);
    const json j = load(out / "oracle/oracle_report.json");
    CHECK(j["passed"] == true);
    CHECK(j["checks"].size() == 7);
}
