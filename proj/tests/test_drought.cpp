#include <doctest.h>

#include <bit>
#include <cmath>

#include "gwdrought/drought.hpp"
#include "gwdrought/oracle.hpp"
#include "gwdrought/rng.hpp"

using namespace gwd;

namespace {
MonthlySeries series(std::vector<double> v, MonthIndex start = {2002, 1}) { return {TimeAxis(start, v.size()), std::move(v)}; }
} // namespace

TEST_CASE("fill_gaps_linear") {
    CHECK(fill_gaps_linear(series({1.0, kMissing, 3.0})).values == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(fill_gaps_linear(series({0.0, kMissing, kMissing, 6.0})).values == std::vector<double>{0.0, 2.0, 4.0, 6.0});
    const auto lead = fill_gaps_linear(series({kMissing, 1.0, 2.0, kMissing}));
    CHECK(is_missing(lead.values[0]));
    CHECK(is_missing(lead.values[3]));
    CHECK(lead.values[1] == 1.0);
    CHECK_THROWS_AS(fill_gaps_linear(series({kMissing, 1.0, kMissing})), InsufficientData);
}

TEST_CASE("fill_gaps_linear keeps present values bitwise") {
    const CounterRng rng(8);
    for (std::uint64_t c = 0; c < 200; ++c) {
        std::vector<double> v(60);
        for (std::size_t t = 0; t < v.size(); ++t)
            v[t] = rng.uniform(c * 1000 + 2 * t) < 0.3 ? kMissing : rng.normal(c * 1000 + 2 * t + 1) * 1e3;
        const auto s = series(v);
        if (s.count_present() < 2) continue;
        const auto f = fill_gaps_linear(s);
        const auto o = oracle::linear_fill(v);
        for (std::size_t t = 0; t < v.size(); ++t) {
            if (!is_missing(v[t])) CHECK(std::bit_cast<std::uint64_t>(f.values[t]) == std::bit_cast<std::uint64_t>(v[t]));
            else if (is_missing(o[t])) CHECK(is_missing(f.values[t]));
            else CHECK(std::abs(f.values[t] - o[t]) <= 1e-12 * (1.0 + std::abs(o[t])));
        }
    }
}

TEST_CASE("detect_events basics") {
    auto cat = detect_events(series({-1.0, -1.0, -1.0}));
    REQUIRE(cat.events.size() == 1);
    CHECK(cat.events[0].duration == 3);
    CHECK(cat.events[0].persistent);

    CHECK(detect_events(series({-1.0, -1.0, 1.0, -1.0, -1.0})).events.empty());
    CHECK(detect_events(series({-1.0, -1.0, 0.0, -1.0, -1.0, -1.0, 2.0})).events.size() == 1);
    CHECK(detect_events(series({-1.0, -1.0, kMissing, -1.0, -1.0})).events.empty());

    cat = detect_events(series({1.0, -0.5, -3.0, -0.1, 2.0, 4.0}));
    REQUIRE(cat.events.size() == 1);
    const auto& e = cat.events[0];
    CHECK(e.start == MonthIndex{2002, 2});
    CHECK(e.end == MonthIndex{2002, 4});
    CHECK(e.peak_departure == -3.0);
    CHECK(e.peak_month == MonthIndex{2002, 3});
    CHECK_FALSE(e.persistent);
    CHECK(e.duration_exclusive() == 2);
    CHECK(cat.wettest->value == 4.0);
    CHECK(cat.wettest->month == MonthIndex{2002, 6});
    CHECK(cat.driest->value == -3.0);
}

TEST_CASE("event spanning 02/2004 to 10/2005 lasts 21 months") {
    const TimeAxis axis({2002, 1}, 180);
    std::vector<double> v(axis.length, 1.0);
    for (std::size_t t = *axis.index_of({2004, 2}); t <= *axis.index_of({2005, 10}); ++t) v[t] = -1.0;
    const auto cat = detect_events(MonthlySeries(axis, v));
    REQUIRE(cat.events.size() == 1);
    CHECK(cat.events[0].start == MonthIndex{2004, 2});
    CHECK(cat.events[0].end == MonthIndex{2005, 10});
    CHECK(cat.events[0].duration == 21);
}

TEST_CASE("inclusive duration of 04/2012 to 12/2016") {
    const TimeAxis axis({2002, 1}, 180);
    std::vector<double> v(axis.length, 1.0);
    for (std::size_t t = *axis.index_of({2012, 4}); t < v.size(); ++t) v[t] = -2.0;
    const auto cat = detect_events(MonthlySeries(axis, v));
    REQUIRE(cat.latest());
    CHECK(cat.latest()->duration == 57);
    CHECK(cat.latest()->duration_exclusive() == 56);
    CHECK(cat.latest()->persistent);
}

TEST_CASE("detect_events agrees with run enumeration and its invariants") {
    const CounterRng rng(2024);
    for (std::uint64_t c = 0; c < 2000; ++c) {
        const std::size_t n = 1 + rng.index(c * 400, 300);
        std::vector<double> v(n);
        for (std::size_t t = 0; t < n; ++t) v[t] = rng.uniform(c * 400 + 1 + t) < 0.5 ? -1.0 : 1.0;
        const auto cat = detect_events(series(v), 3);
        const auto runs = oracle::maximal_negative_runs(v, 3);
        REQUIRE(cat.events.size() == runs.size());
        for (std::size_t e = 0; e < runs.size(); ++e) {
            const auto& ev = cat.events[e];
            const std::size_t lo = static_cast<std::size_t>(months_between({2002, 1}, ev.start));
            const std::size_t hi = static_cast<std::size_t>(months_between({2002, 1}, ev.end));
            CHECK(lo == runs[e].first);
            CHECK(hi == runs[e].last);
            CHECK(ev.duration == static_cast<int>(hi - lo + 1));
            CHECK(ev.duration >= 3);
            CHECK(ev.peak_departure <= 0.0);
            if (lo > 0) CHECK(v[lo - 1] >= 0.0);
            if (hi + 1 < n) CHECK(v[hi + 1] >= 0.0);
            if (e > 0) CHECK(cat.events[e - 1].end.plus(1) < ev.start);
        }
    }
}

TEST_CASE("longest keeps every tie") {
    const auto cat = detect_events(series({-1, -1, -1, 1, -1, -1, -1, 1, -1, -1, -1, -1, 1}));
    REQUIRE(cat.longest().size() == 1);
    CHECK(cat.longest()[0].duration == 4);
    const auto tie = detect_events(series({-1, -1, -1, 1, -1, -1, -1, 1}));
    CHECK(tie.longest().size() == 2);
}

TEST_CASE("drought_mask and areal_extent") {
    const Grid2D g(10.5, 70.5, 1.0, 1.0, 2, 2);
    const TimeAxis axis({2002, 1}, 6);
    GriddedSeries f(g, axis, std::vector<double>(axis.length * 4, 1.0));
    const std::vector<double> dry{1.0, -1.0, -2.0, -1.0, -0.5, 3.0};
    for (std::size_t t = 0; t < axis.length; ++t) f.at(t, 1, 0) = dry[t];

    const auto mask = drought_mask(f);
    for (std::size_t t = 0; t < axis.length; ++t)
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                const bool expect = i == 1 && j == 0 && t >= 1 && t <= 4;
                CHECK(mask.at(t, i, j) == (expect ? DroughtMask::kDrought : DroughtMask::kNoDrought));
            }

    const RegionMask half(g, {"R", "", "R", ""});
    const auto ext = areal_extent(mask, half, "R", Weighting::uniform);
    CHECK(ext.values[0] == 0.0);
    CHECK(ext.values[2] == 50.0);
    CHECK(most_widespread(ext)->month == MonthIndex{2002, 2});

    const RegionMask single(g, {"", "", "D", ""});
    CHECK(areal_extent(mask, single, "D").values[3] == 100.0);
    CHECK_THROWS_WITH_AS(areal_extent(mask, single, "X"), doctest::Contains("unknown region"), Error);

    f.at(2, 0, 0) = kMissing;
    const auto with_gap = drought_mask(f);
    CHECK(with_gap.at(2, 0, 0) == DroughtMask::kNoData);
    CHECK(areal_extent(with_gap, half, "R", Weighting::uniform).values[2] == 100.0);
}

TEST_CASE("drought_mask of a single cell reproduces detect_events") {
    const CounterRng rng(77);
    std::vector<double> v(120);
    for (std::size_t t = 0; t < v.size(); ++t) v[t] = rng.normal(t);
    const Grid2D g(0.5, 0.5, 1.0, 1.0, 1, 1);
    const GriddedSeries f(g, TimeAxis({2002, 1}, v.size()), v);
    const auto mask = drought_mask(f);
    std::vector<bool> member(v.size(), false);
    for (const auto& e : detect_events(series(v)).events)
        for (auto m = e.start; m <= e.end; m = m.plus(1)) member[static_cast<std::size_t>(months_between({2002, 1}, m))] = true;
    for (std::size_t t = 0; t < v.size(); ++t) CHECK((mask.at(t, 0, 0) == DroughtMask::kDrought) == member[t]);
}

TEST_CASE("areal_extent stays within 0..100") {
    const CounterRng rng(5);
    const Grid2D g(0.5, 0.5, 1.0, 1.0, 4, 5);
    const TimeAxis axis({2002, 1}, 48);
    GriddedSeries f(g, axis);
    for (std::size_t k = 0; k < f.values.size(); ++k) f.values[k] = rng.normal(k);
    std::vector<std::string> labels(g.cells(), "A");
    const RegionMask rm(g, labels);
    for (double p : areal_extent(drought_mask(f), rm, "A").values) {
        CHECK(p >= 0.0);
        CHECK(p <= 100.0);
    }
    std::fill(f.values.begin(), f.values.end(), 2.0);
    for (double p : areal_extent(drought_mask(f), rm, "A").values) CHECK(p == 0.0);
}

TEST_CASE("period_change") {
    const MonthRange early{{2002, 1}, {2004, 12}}, late{{2014, 1}, {2016, 12}};
    const TimeAxis axis({2002, 1}, 180);
    auto make = [&](double a, double b) {
        std::vector<double> v(180, 0.0);
        for (std::size_t t = 0; t < 36; ++t) v[t] = a;
        for (std::size_t t = 144; t < 180; ++t) v[t] = b;
        return MonthlySeries(axis, v);
    };
    CHECK(period_change(make(10, 10), early, late) == 0.0);
    CHECK(period_change(make(50, 25), early, late) == doctest::Approx(-50.0));
    CHECK(period_change(make(-50, -75), early, late) == doctest::Approx(-50.0));
    CHECK_THROWS_WITH_AS(period_change(make(0, 5), early, late), doctest::Contains("undefined baseline"), Error);
    CHECK_THROWS_AS(period_change(MonthlySeries::missing(axis), early, late), InsufficientData);
}
