#include <doctest.h>

#include <cmath>

#include "gwdrought/anomaly.hpp"
#include "gwdrought/optimal_period.hpp"
#include "gwdrought/rng.hpp"
#include "gwdrought/synth.hpp"

using namespace gwd;

namespace {

const MonthRange kAnalysis{{2002, 1}, {2016, 12}};

std::vector<double> noise(std::size_t n, std::uint64_t seed, std::uint64_t stream = 0) {
    const CounterRng rng(seed, stream);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = rng.normal(i);
    return v;
}

// Precipitation long enough to profile a 2002-2016 target up to K months.
MonthlySeries precip_for(std::size_t K, std::uint64_t seed) {
    return gen_precip(TimeAxis(kAnalysis.first.plus(-static_cast<std::int64_t>(K) + 1), 180 + K - 1), seed);
}

ProfileEntry entry(std::size_t k, double r, double p) {
    ProfileEntry e;
    e.k = k;
    e.median_r = r;
    e.median_p = p;
    return e;
}

} // namespace

TEST_CASE("pearson_r") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> affine, neg;
    for (double v : x) {
        affine.push_back(2 * v + 1);
        neg.push_back(-v);
    }
    CHECK(pearson_r(x, affine) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pearson_r(x, neg) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(pearson_r(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4}) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK_THROWS_WITH_AS(pearson_r(std::vector<double>{1, 2}, std::vector<double>{2, 1}), doctest::Contains("degenerate correlation"), Error);
    CHECK_THROWS_WITH_AS(pearson_r(x, std::vector<double>(5, 3.0)), doctest::Contains("degenerate correlation"), Error);
    // pairwise-complete
    const std::vector<double> xm{1, 2, kMissing, 3, 4}, ym{1, 3, 100, 2, 4};
    CHECK(pearson_r(xm, ym) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("pearson_r affine invariance") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto x = noise(200, s, 1), y = noise(200, s, 2);
        std::vector<double> xa, ya, xn;
        for (std::size_t i = 0; i < x.size(); ++i) {
            xa.push_back(3.5 * x[i] - 7.0);
            ya.push_back(0.01 * y[i] + 2.0);
            xn.push_back(-2.0 * x[i]);
        }
        const double r = pearson_r(x, y);
        CHECK(pearson_r(xa, ya) == doctest::Approx(r).epsilon(1e-12));
        CHECK(pearson_r(xn, y) == doctest::Approx(-r).epsilon(1e-12));
    }
}

TEST_CASE("corr_p_value against a numerical t-distribution") {
    CHECK(corr_p_value(0.0, 10) == 1.0);
    CHECK(corr_p_value(1.0, 10) == 0.0);
    CHECK(corr_p_value(-1.0, 10) == 0.0);
    // Two-sided Student-t tail probabilities computed independently.
    CHECK(std::abs(corr_p_value(0.8, 4) - 0.19999999999999987) < 1e-12);
    CHECK(std::abs(corr_p_value(0.5, 30) - 0.004899933667068092) < 1e-12);
    CHECK(std::abs(corr_p_value(-0.3, 100) - 0.0024257334625830316) < 1e-12);
    CHECK(std::abs(corr_p_value(0.95, 10) - 2.5737060546875074e-05) < 1e-15);
    CHECK(std::abs(corr_p_value(0.1, 500) - 0.025346603704893656) < 1e-12);
    CHECK(corr_p_value(0.999999, 50) < 1e-10);
}

TEST_CASE("corr_p_value monotonicity") {
    for (std::size_t n : {5u, 30u, 180u}) {
        double prev = 1.0;
        for (int i = 1; i < 100; ++i) {
            const double p = corr_p_value(i / 100.0, n);
            CHECK(p < prev);
            CHECK(corr_p_value(-i / 100.0, n) == p);
            prev = p;
        }
    }
    for (double r : {0.05, 0.3, 0.7}) {
        double prev = 1.0;
        for (std::size_t n = 4; n < 300; n += 7) {
            const double p = corr_p_value(r, n);
            CHECK(p < prev);
            prev = p;
        }
    }
}

TEST_CASE("expanding_median_r window counts") {
    const auto x = noise(400, 1, 1), y = noise(400, 1, 2);
    const std::span<const double> xs(x), ys(y);
    CHECK(expanding_median_r(xs.first(180), ys.first(180), WindowScheme::monthly(60)).window_r.size() == 121);
    CHECK(expanding_median_r(xs.first(84), ys.first(84), WindowScheme::wells(40)).window_r.size() == 45);
    for (std::size_t n = 60; n <= 260; ++n)
        REQUIRE(expanding_median_r(xs.first(n), ys.first(n), WindowScheme::monthly(60)).window_r.size() == n - 59);
    CHECK_THROWS_AS(expanding_median_r(xs.first(59), ys.first(59), WindowScheme::monthly(60)), InsufficientData);
}

TEST_CASE("expanding_median_r windows") {
    const auto x = noise(100, 3);
    const auto same = expanding_median_r(x, x, WindowScheme::monthly(60));
    CHECK(same.median_r == 1.0);
    for (double r : same.window_r) CHECK(r == 1.0);

    const auto y = noise(100, 3, 9);
    const auto ex = expanding_median_r(x, y, WindowScheme::monthly(60));
    const std::span<const double> xs(x), ys(y);
    CHECK(ex.window_r.front() == doctest::Approx(pearson_r(xs.first(60), ys.first(60))).epsilon(1e-12));
    CHECK(ex.window_r.back() == doctest::Approx(pearson_r(xs, ys)).epsilon(1e-12));
    CHECK(ex.median_r == median(ex.window_r));
    CHECK(ex.median_p == median(ex.window_p));
}

TEST_CASE("seasonal4 windows count complete pairs") {
    std::vector<double> x = noise(240, 5), y = noise(240, 5, 1);
    // quarterly sampling: three of every four months missing
    for (std::size_t t = 0; t < x.size(); ++t)
        if (t % 3 != 0) x[t] = kMissing;
    const auto ex = expanding_median_r(x, y, WindowScheme::wells(40));
    CHECK(ex.window_r.size() == 80 - 40 + 1);
}

TEST_CASE("median and sample_sd") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK(is_missing(median({})));
    CHECK(sample_sd(std::vector<double>{5.0}) == 0.0);
    CHECK(sample_sd(std::vector<double>{1.0, 3.0}) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("correlation_profile recovers an exact accumulation") {
    const MonthlySeries precip = precip_for(24, 17);
    const MonthlySeries target = accumulate(precip, 7).slice(kAnalysis);
    const auto profile = correlation_profile(target, precip, 24, WindowScheme::monthly(60));
    REQUIRE(profile.max_k() == 24);
    CHECK(profile.entries[6].k == 7);
    CHECK(profile.entries[6].median_r == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(profile.entries[6].n_windows == 121);
    const auto res = optimal_period(profile);
    REQUIRE(res.significant());
    CHECK(res.optimum->k == 7);

    const auto full = full_series_r(target, precip, 24);
    REQUIRE(full.significant());
    CHECK(full.optimum->k == 7);
    CHECK(full.optimum->median_r == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("correlation_profile equals composed accumulate and expanding_median_r") {
    const MonthlySeries precip = precip_for(30, 4);
    const MonthlySeries target = gen_lagged_target(precip, 12, 0.8, 4).slice(kAnalysis);
    const auto profile = correlation_profile(target, precip, 30, WindowScheme::monthly(60));
    for (std::size_t k : {1u, 5u, 12u, 30u}) {
        const auto aligned = accumulate(precip, k).slice(kAnalysis);
        const auto ex = expanding_median_r(target.values, aligned.values, WindowScheme::monthly(60));
        CHECK(profile.entries[k - 1].median_r == ex.median_r);
        CHECK(profile.entries[k - 1].median_p == ex.median_p);
        CHECK(profile.entries[k - 1].window_r == ex.window_r);
    }
}

TEST_CASE("correlation_profile edge cases") {
    const MonthlySeries precip = precip_for(12, 8);
    const MonthlySeries target = gen_lagged_target(precip, 3, 0.2, 8).slice(kAnalysis);
    CHECK(correlation_profile(target, precip, 1, WindowScheme::monthly(60)).max_k() == 1);
    CHECK(required_precip_start(target, 180) == MonthIndex{1987, 2});
    CHECK_THROWS_WITH_AS(correlation_profile(target, precip, 13, WindowScheme::monthly(60)),
                         doctest::Contains("need precipitation from 2001-01"), InsufficientData);
}

TEST_CASE("white-noise target shows no coupling") {
    const MonthlySeries precip = precip_for(36, 21);
    const MonthlySeries target(TimeAxis::spanning(kAnalysis), noise(180, 21, 77));
    const auto profile = correlation_profile(target, precip, 36, WindowScheme::monthly(60));
    std::size_t significant = 0;
    for (const auto& e : profile.entries) {
        CHECK(std::abs(e.median_r) < 0.35);
        if (e.median_p < 0.05) ++significant;
    }
    CHECK(significant < profile.entries.size() / 2);
}

TEST_CASE("optimal_period selection") {
    CorrelationProfile p;
    for (std::size_t k = 1; k <= 30; ++k) p.entries.push_back(entry(k, 0.1 + 0.01 * static_cast<double>(k % 7), 0.01));
    p.entries[17].median_r = 0.9;
    auto res = optimal_period(p);
    REQUIRE(res.significant());
    CHECK(res.optimum->k == 18);

    SUBCASE("ties go to the smallest k") {
        p.entries[24].median_r = 0.9;
        CHECK(optimal_period(p).optimum->k == 18);
    }
    SUBCASE("significance gate") {
        p.entries[17].median_p = 0.2;
        res = optimal_period(p);
        CHECK(res.optimum->k != 18);
        CHECK(res.strongest.k == 18);
    }
    SUBCASE("all negative") {
        for (auto& e : p.entries) e.median_r = -std::abs(e.median_r);
        res = optimal_period(p);
        CHECK_FALSE(res.significant());
    }
    SUBCASE("bad alpha") { CHECK_THROWS_AS(optimal_period(p, 1.5), Error); }
}

TEST_CASE("k_star is invariant under positive affine maps of both series") {
    const MonthlySeries precip = precip_for(40, 12);
    const MonthlySeries target = gen_lagged_target(precip, 15, 0.5, 12).slice(kAnalysis);
    const auto base = optimal_period(correlation_profile(target, precip, 40, WindowScheme::monthly(60)));
    MonthlySeries p2 = precip, t2 = target;
    for (double& v : p2.values) v = v / 10.0;
    for (double& v : t2.values)
        if (!is_missing(v)) v = 250.0 * v + 3.0;
    const auto scaled = optimal_period(correlation_profile(t2, p2, 40, WindowScheme::monthly(60)));
    REQUIRE(base.significant());
    REQUIRE(scaled.significant());
    CHECK(base.optimum->k == scaled.optimum->k);
    CHECK(base.optimum->median_r == doctest::Approx(scaled.optimum->median_r).epsilon(1e-10));
}

TEST_CASE("full_series_r on a constant target") {
    const MonthlySeries precip = precip_for(6, 2);
    const MonthlySeries target(TimeAxis::spanning(kAnalysis), std::vector<double>(180, 4.0));
    CHECK_THROWS_WITH_AS(full_series_r(target, precip, 6), doctest::Contains("degenerate"), Error);
}

TEST_CASE("autocorrelation") {
    const auto white = gen_ar1(180, 0.0, 1.0, 31);
    const auto ac = autocorrelation(white, 24);
    REQUIRE(ac.size() == 25);
    CHECK(ac[0] == 1.0);
    CHECK(std::abs(ac[12]) < 0.2);

    const auto ar = autocorrelation(gen_ar1(5000, 0.9, 1.0, 32), 3);
    CHECK(std::abs(ar[1] - 0.9) < 0.02);

    const MonthlySeries shortish(TimeAxis({2000, 1}, 5), {1.0, 2.0, 0.5, 3.0, 1.0});
    const auto sc = autocorrelation(shortish, 4);
    CHECK(!is_missing(sc[1]));
    CHECK(is_missing(sc[3]));
    CHECK(is_missing(sc[4]));
}
