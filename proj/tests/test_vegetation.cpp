#include <doctest.h>

#include <cmath>

#include "gwdrought/anomaly.hpp"
#include "gwdrought/rng.hpp"
#include "gwdrought/synth.hpp"
#include "gwdrought/vegetation.hpp"

using namespace gwd;

TEST_CASE("week midpoints") {
    CHECK(WeekKey{2001, 1}.midpoint_month() == MonthIndex{2001, 1});
    CHECK(WeekKey{2001, 4}.midpoint_month() == MonthIndex{2001, 1});  // day 25
    CHECK(WeekKey{2001, 5}.midpoint_month() == MonthIndex{2001, 2});  // day 32
    CHECK(WeekKey{2001, 9}.midpoint_month() == MonthIndex{2001, 3});  // day 60
    CHECK(WeekKey{2004, 9}.midpoint_month() == MonthIndex{2004, 2});  // day 60 of a leap year
    CHECK(WeekKey{2001, 53}.midpoint_month() == MonthIndex{2002, 1});
    CHECK(WeekKey{2004, 53}.midpoint_month() == MonthIndex{2005, 1});
    CHECK_THROWS_AS(WeekKey({2001, 54}).midpoint_month(), Error);
}

TEST_CASE("weekly_to_monthly") {
    SUBCASE("constant weeks, any calendar layout") {
        for (int year : {1999, 2000, 2001, 2004}) {
            WeeklySeries w;
            for (int y = year; y < year + 3; ++y)
                for (int k = 1; k <= 53; ++k) {
                    w.weeks.push_back({y, k});
                    w.values.push_back(0.5);
                }
            for (double v : weekly_to_monthly(w).values) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
        }
    }
    SUBCASE("mean of the weeks in a month") {
        const WeeklySeries w{{{2001, 1}, {2001, 2}, {2001, 5}}, {0.2, 0.4, 0.9}};
        const auto m = weekly_to_monthly(w);
        CHECK(m.axis.start == MonthIndex{2001, 1});
        CHECK(m.values[0] == doctest::Approx(0.3));
        CHECK(m.values[1] == doctest::Approx(0.9));
    }
    SUBCASE("interior empty month is interpolated") {
        const WeeklySeries w{{{2001, 1}, {2001, 9}}, {0.2, 0.4}};
        const auto m = weekly_to_monthly(w);
        REQUIRE(m.size() == 3);
        CHECK(m.values[1] == doctest::Approx(0.3));
    }
    SUBCASE("too little data") {
        const WeeklySeries w{{{2001, 1}, {2001, 2}}, {0.2, 0.4}};
        CHECK_THROWS_AS(weekly_to_monthly(w), InsufficientData);
    }
}

TEST_CASE("weekly_to_monthly on a field matches the per-cell series") {
    const Grid2D g(0.5, 0.5, 1.0, 1.0, 1, 2);
    WeeklyField f;
    f.grid = g;
    WeeklySeries a, b;
    const CounterRng rng(4);
    for (int k = 1; k <= 53; ++k) {
        f.weeks.push_back({2003, k});
        const double va = 0.3 + 0.1 * rng.uniform(static_cast<std::uint64_t>(k));
        const double vb = k % 5 == 0 ? kMissing : 0.5;
        f.values.push_back(va);
        f.values.push_back(vb);
        a.weeks.push_back({2003, k});
        a.values.push_back(va);
        b.weeks.push_back({2003, k});
        b.values.push_back(vb);
    }
    const auto m = weekly_to_monthly(f);
    const auto ma = weekly_to_monthly(a), mb = weekly_to_monthly(b);
    CHECK(m.axis == ma.axis);
    CHECK(m.cell_series(0, 0).values == ma.values);
    CHECK(m.cell_series(0, 1).values == mb.values);
}

TEST_CASE("irrigation_masks") {
    const Grid2D g(0.5, 0.5, 1.0, 1.0, 1, 5);
    const IrrigationFraction f{g, {61.0, 60.0, 5.0, 30.0, kMissing}, {70.0, 65.0, 10.0, 19.0, 50.0}};
    const auto m = irrigation_masks(f);
    CHECK(m.gw_irrigated.classes == std::vector<int>{1, 0, 0, 0, CategoricalGrid::kNoClass});
    CHECK(m.non_irrigated.classes == std::vector<int>{0, 0, 1, 1, 0});
    CHECK_THROWS_AS(irrigation_masks(f, 0.0, 20.0), Error);
    CHECK_THROWS_AS(irrigation_masks(IrrigationFraction{g, {101.0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}}), Error);
}

TEST_CASE("irrigation strata are disjoint") {
    const CounterRng rng(12);
    const Grid2D g(0.5, 0.5, 1.0, 1.0, 10, 10);
    IrrigationFraction f{g, std::vector<double>(100), std::vector<double>(100)};
    for (std::size_t c = 0; c < 100; ++c) {
        f.gw_fraction[c] = 100.0 * rng.uniform(2 * c);
        f.total_equipped[c] = 100.0 * rng.uniform(2 * c + 1);
    }
    for (double gw : {20.0, 50.0, 90.0})
        for (double rf : {5.0, 20.0, gw}) {
            const auto m = irrigation_masks(f, gw, rf);
            for (std::size_t c = 0; c < 100; ++c) CHECK_FALSE((m.gw_irrigated.classes[c] == 1 && m.non_irrigated.classes[c] == 1));
        }
}

TEST_CASE("seasonal_mean") {
    const TimeAxis axis({2001, 1}, 36);
    SUBCASE("constant") {
        const MonthlySeries s(axis, std::vector<double>(36, 0.4));
        for (double v : seasonal_mean(s, Season::kharif()).values) CHECK(v == doctest::Approx(0.4));
        for (double v : seasonal_mean(s, Season::rabi()).values) CHECK(v == doctest::Approx(0.4));
    }
    SUBCASE("kharif uses June to September") {
        std::vector<double> v(36, 100.0);
        const double jjas[] = {0.2, 0.4, 0.6, 0.8};
        for (int m = 0; m < 4; ++m) v[static_cast<std::size_t>(5 + m)] = jjas[m];
        MonthlySeries s(axis, v);
        const auto k = seasonal_mean(s, Season::kharif());
        CHECK(k.years == std::vector<int>{2001, 2002, 2003});
        CHECK(k.values[0] == doctest::Approx(0.5));
        s.values[6] = kMissing;
        CHECK(is_missing(seasonal_mean(s, Season::kharif()).values[0]));
    }
    SUBCASE("rabi crosses the year boundary and is labelled by its October") {
        std::vector<double> v(36);
        for (std::size_t t = 0; t < 36; ++t) v[t] = 1000.0 * axis.at(t).year + axis.at(t).month;
        const auto r = seasonal_mean(MonthlySeries(axis, v), Season::rabi());
        // only 2001-10..2002-03 and 2002-10..2003-03 lie wholly on the axis
        REQUIRE(r.years == std::vector<int>{2001, 2002});
        const double expect = (2001 * 1000.0 * 3 + 10 + 11 + 12 + 2002 * 1000.0 * 3 + 1 + 2 + 3) / 6.0;
        CHECK(r.values[0] == doctest::Approx(expect));
    }
}

TEST_CASE("accumulated NDVI coupling") {
    const TimeAxis ndvi_axis({2000, 1}, 204);
    const MonthlySeries ndvi = gen_ar1(204, 0.5, 0.05, 3, ndvi_axis.start);
    const TimeAxis target_axis({2002, 1}, 180);

    SUBCASE("exact negative construction") {
        MonthlySeries gwsa = accumulated_ndvi(ndvi, target_axis, 12);
        for (double& v : gwsa.values) v = -v;
        const auto c = ndvi_gwsa_coupling(ndvi, gwsa, 12, WindowScheme::monthly(60));
        CHECK(c.median_r == doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("k = 1 reduces to plain windows") {
        const MonthlySeries gwsa = gen_ar1(180, 0.8, 10.0, 9, target_axis.start);
        const auto c = ndvi_gwsa_coupling(ndvi, gwsa, 1, WindowScheme::monthly(60));
        const auto plain = expanding_median_r(gwsa.values, ndvi.slice(target_axis.range()).values, WindowScheme::monthly(60));
        CHECK(c.median_r == plain.median_r);
        CHECK(c.window_r == plain.window_r);
    }
    SUBCASE("independent noise") {
        const MonthlySeries gwsa = gen_ar1(180, 0.0, 10.0, 19, target_axis.start);
        CHECK(std::abs(ndvi_gwsa_coupling(ndvi, gwsa, 4, WindowScheme::monthly(60)).median_r) < 0.3);
    }
    SUBCASE("history too short") {
        CHECK_NOTHROW(accumulated_ndvi(ndvi, target_axis, 25));
        CHECK_THROWS_WITH_AS(accumulated_ndvi(ndvi, target_axis, 26), doctest::Contains("1999-12"), InsufficientData);
    }
}

TEST_CASE("irrigated_vs_rainfed_ndvi") {
    const Grid2D g(0.125, 0.125, 0.25, 0.25, 2, 2);
    const TimeAxis axis({2003, 1}, 24);
    const RegionMask regions(g, {"R", "R", "R", "R"});
    GriddedSeries ndvi(g, axis);
    for (std::size_t t = 0; t < axis.length; ++t) {
        ndvi.at(t, 0, 0) = 0.6;
        ndvi.at(t, 0, 1) = 0.6;
        ndvi.at(t, 1, 0) = 0.3;
        ndvi.at(t, 1, 1) = 0.45;
    }
    const IrrigationMasks masks{{g, {1, 1, 0, 0}}, {g, {0, 0, 1, 0}}};
    const auto out = irrigated_vs_rainfed_ndvi(ndvi, masks, regions, "R", Season::kharif());
    REQUIRE(out.gw_irrigated.years.size() == 2);
    CHECK(out.gw_irrigated.values[0] == doctest::Approx(0.6));
    CHECK(out.non_irrigated.values[1] == doctest::Approx(0.3));

    const IrrigationMasks no_rainfed{{g, {1, 1, 0, 0}}, {g, {0, 0, 0, 0}}};
    const auto empty = irrigated_vs_rainfed_ndvi(ndvi, no_rainfed, regions, "R", Season::kharif());
    for (double v : empty.non_irrigated.values) CHECK(is_missing(v));

    std::fill(ndvi.values.begin(), ndvi.values.end(), 0.5);
    const auto same = irrigated_vs_rainfed_ndvi(ndvi, masks, regions, "R", Season::rabi());
    CHECK(same.gw_irrigated.values == same.non_irrigated.values);
}

TEST_CASE("project_regions") {
    const Grid2D coarse(10.5, 70.5, 1.0, 1.0, 1, 2);
    const RegionMask regions(coarse, {"A", "B"});
    const Grid2D fine(10.125, 70.125, 0.25, 0.25, 4, 9); // last column lies beyond the coarse grid
    const auto p = project_regions(regions, fine);
    CHECK(p.membership[fine.flat(0, 0)] == "A");
    CHECK(p.membership[fine.flat(3, 3)] == "A");
    CHECK(p.membership[fine.flat(2, 4)] == "B");
    CHECK(p.membership[fine.flat(1, 7)] == "B");
    CHECK(p.membership[fine.flat(1, 8)].empty());
}
