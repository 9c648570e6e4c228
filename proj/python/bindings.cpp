// Python bindings for the main library operations. Monthly series cross the
// boundary as (start "YYYY-MM", list of floats) with NaN for missing months.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gwdrought/anomaly.hpp"
#include "gwdrought/attribution.hpp"
#include "gwdrought/drought.hpp"
#include "gwdrought/optimal_period.hpp"
#include "gwdrought/oracle.hpp"
#include "gwdrought/parallel.hpp"
#include "gwdrought/synth.hpp"
#include "gwdrought/vegetation.hpp"

namespace py = pybind11;
using namespace gwd;

namespace {

MonthlySeries make_series(const std::string& start, std::vector<double> values) {
    TimeAxis axis(MonthIndex::parse(start), values.size());
    return {axis, std::move(values)};
}

py::dict series_dict(const MonthlySeries& s) {
    py::dict d;
    d["start"] = s.axis.start.str();
    d["values"] = s.values;
    return d;
}

RegressionDesign design_from(const std::vector<double>& y, const std::vector<std::vector<double>>& xs,
                             const std::vector<std::string>& names) {
    RegressionDesign d;
    d.response = y;
    d.predictors = xs;
    d.names = names;
    if (d.names.empty())
        for (std::size_t j = 0; j < xs.size(); ++j) d.names.push_back("x" + std::to_string(j + 1));
    d.validate();
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Groundwater drought analysis kernels";

    // translators run newest first, so the subclass goes last
    auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
    py::register_exception<InsufficientData>(m, "InsufficientData", base.ptr());

    m.def("set_thread_count", &set_thread_count, py::arg("n"));
    m.def("months_between", [](const std::string& a, const std::string& b) {
        return months_between(MonthIndex::parse(a), MonthIndex::parse(b));
    });

    m.def(
        "accumulate",
        [](const std::vector<double>& v, std::size_t k) { return accumulate(make_series("2000-01", v), k).values; },
        py::arg("values"), py::arg("k"));
    m.def(
        "standardize", [](const std::vector<double>& v) { return standardize(make_series("2000-01", v)).values; },
        py::arg("values"));
    m.def(
        "climatology_anomaly",
        [](const std::string& start, const std::vector<double>& v, const std::string& baseline) {
            const auto s = make_series(start, v);
            return remove_climatology(s, monthly_climatology(s, MonthRange::parse(baseline))).values;
        },
        py::arg("start"), py::arg("values"), py::arg("baseline"));

    m.def("pearson_r", [](const std::vector<double>& x, const std::vector<double>& y) { return pearson_r(x, y); });
    m.def("corr_p_value", &corr_p_value, py::arg("r"), py::arg("n"));
    m.def(
        "expanding_median_r",
        [](const std::vector<double>& x, const std::vector<double>& y, std::size_t initial_window, bool seasonal) {
            const WindowScheme w{initial_window, 1, seasonal ? WindowMode::seasonal4 : WindowMode::monthly};
            const auto e = expanding_median_r(x, y, w);
            py::dict d;
            d["median_r"] = e.median_r;
            d["median_p"] = e.median_p;
            d["window_r"] = e.window_r;
            return d;
        },
        py::arg("x"), py::arg("y"), py::arg("initial_window") = 60, py::arg("seasonal") = false);
    m.def(
        "optimal_period",
        [](const std::string& target_start, const std::vector<double>& target, const std::string& precip_start,
           const std::vector<double>& precip, std::size_t K, std::size_t initial_window, double alpha) {
            const auto profile = correlation_profile(make_series(target_start, target), make_series(precip_start, precip),
                                                     K, WindowScheme::monthly(initial_window));
            const auto res = optimal_period(profile, alpha);
            py::dict d;
            d["k_star"] = res.optimum ? py::cast(res.optimum->k) : py::none();
            d["median_r"] = res.optimum ? res.optimum->median_r : kMissing;
            d["strongest_k"] = res.strongest.k;
            std::vector<double> curve;
            for (const auto& e : profile.entries) curve.push_back(e.median_r);
            d["profile"] = curve;
            return d;
        },
        py::arg("target_start"), py::arg("target"), py::arg("precip_start"), py::arg("precip"), py::arg("K") = 180,
        py::arg("initial_window") = 60, py::arg("alpha") = 0.05);

    m.def(
        "fill_gaps_linear", [](const std::vector<double>& v) { return fill_gaps_linear(make_series("2000-01", v)).values; },
        py::arg("values"));
    m.def(
        "detect_events",
        [](const std::string& start, const std::vector<double>& v, int min_run) {
            const auto cat = detect_events(make_series(start, v), min_run);
            py::list events;
            for (const auto& e : cat.events) {
                py::dict d;
                d["start"] = e.start.str();
                d["end"] = e.end.str();
                d["duration"] = e.duration;
                d["peak_departure"] = e.peak_departure;
                d["peak_month"] = e.peak_month.str();
                d["persistent"] = e.persistent;
                events.append(d);
            }
            return events;
        },
        py::arg("start"), py::arg("values"), py::arg("min_run") = 3);
    m.def(
        "period_change",
        [](const std::string& start, const std::vector<double>& v, const std::string& early, const std::string& late) {
            return period_change(make_series(start, v), MonthRange::parse(early), MonthRange::parse(late));
        },
        py::arg("start"), py::arg("values"), py::arg("early"), py::arg("late"));

    m.def(
        "ols_r2",
        [](const std::vector<double>& y, const std::vector<std::vector<double>>& xs, const std::vector<std::size_t>& subset) {
            return ols_r2(design_from(y, xs, {}), subset);
        },
        py::arg("y"), py::arg("predictors"), py::arg("subset"));
    m.def(
        "lmg_shares",
        [](const std::vector<double>& y, const std::vector<std::vector<double>>& xs) {
            return lmg_shares(design_from(y, xs, {}));
        },
        py::arg("y"), py::arg("predictors"));
    m.def(
        "bootstrap_ri",
        [](const std::vector<double>& y, const std::vector<std::vector<double>>& xs, const std::vector<std::string>& names,
           std::size_t runs, double alpha, std::uint64_t seed) {
            const auto ri = bootstrap_ri(design_from(y, xs, names), runs, alpha, seed);
            py::list preds;
            for (const auto& p : ri.predictors) {
                py::dict d;
                d["name"] = p.name;
                d["share"] = p.share;
                d["ci_low"] = p.ci_low;
                d["ci_high"] = p.ci_high;
                preds.append(d);
            }
            py::dict d;
            d["predictors"] = preds;
            d["model_r2"] = ri.model_r2;
            d["runs"] = ri.runs;
            d["alpha"] = ri.alpha;
            d["seed"] = ri.seed;
            return d;
        },
        py::arg("y"), py::arg("predictors"), py::arg("names") = std::vector<std::string>{}, py::arg("runs") = 1000,
        py::arg("alpha") = 0.05, py::arg("seed") = 0);

    m.def(
        "seasonal_mean",
        [](const std::string& start, const std::vector<double>& v, const std::string& season) {
            const Season s = season == "rabi" ? Season::rabi() : Season::kharif();
            const auto out = seasonal_mean(make_series(start, v), s);
            py::dict d;
            d["years"] = out.years;
            d["values"] = out.values;
            return d;
        },
        py::arg("start"), py::arg("values"), py::arg("season"));

    m.def(
        "gen_ar1",
        [](std::size_t n, double phi, double sd, std::uint64_t seed) { return gen_ar1(n, phi, sd, seed).values; },
        py::arg("n"), py::arg("phi"), py::arg("sd"), py::arg("seed"));
    m.def(
        "gen_precip",
        [](const std::string& start, std::size_t n, std::uint64_t seed) {
            return series_dict(gen_precip(TimeAxis(MonthIndex::parse(start), n), seed));
        },
        py::arg("start"), py::arg("n"), py::arg("seed"));
    m.def(
        "gen_lagged_target",
        [](const std::string& start, const std::vector<double>& precip, std::size_t k, double noise_sd, std::uint64_t seed) {
            return series_dict(gen_lagged_target(make_series(start, precip), k, noise_sd, seed));
        },
        py::arg("start"), py::arg("precip"), py::arg("k_true"), py::arg("noise_sd") = 0.0, py::arg("seed") = 0);

    m.def(
        "oracle_suite",
        [](std::uint64_t seed, std::size_t cases) {
            const auto rep = oracle::run_suite(oracle::Targets::production(), {seed, cases});
            py::list checks;
            for (const auto& c : rep.checks) {
                py::dict d;
                d["op"] = c.op;
                d["cases"] = c.cases;
                d["max_abs_dev"] = c.max_abs_dev;
                d["tolerance"] = c.tolerance;
                d["passed"] = c.passed;
                checks.append(d);
            }
            return checks;
        },
        py::arg("seed") = 20240101, py::arg("cases") = 50);
}
