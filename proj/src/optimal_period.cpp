#include "gwdrought/optimal_period.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/beta.hpp>

#include "gwdrought/anomaly.hpp"
#include "gwdrought/parallel.hpp"

namespace gwd {

void WindowScheme::validate() const {
    if (initial_window < 3) throw Error("initial window must hold at least 3 samples");
    if (step < 1) throw Error("window step must be at least 1");
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error("correlation inputs differ in length");
    double sx = 0.0, sy = 0.0;
    std::size_t n = 0;
    bool x_varies = false, y_varies = false;
    double x0 = 0.0, y0 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (is_missing(x[i]) || is_missing(y[i])) continue;
        if (n == 0) {
            x0 = x[i];
            y0 = y[i];
        }
        x_varies |= x[i] != x0;
        y_varies |= y[i] != y0;
        sx += x[i];
        sy += y[i];
        ++n;
    }
    if (n < 3 || !x_varies || !y_varies) throw Error("degenerate correlation");
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (is_missing(x[i]) || is_missing(y[i])) continue;
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double corr_p_value(double r, std::size_t n) {
    if (n < 3) throw Error("p-value needs at least 3 samples");
    if (is_missing(r)) return kMissing;
    const double r2 = r * r;
    if (r2 >= 1.0) return 0.0;
    const double df = static_cast<double>(n - 2);
    const double t2 = df * r2 / (1.0 - r2);
    // P(|T| > t) = I_{df/(df+t^2)}(df/2, 1/2)
    return boost::math::ibeta(df / 2.0, 0.5, df / (df + t2));
}

double median(std::vector<double> v) {
    if (v.empty()) return kMissing;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

double sample_sd(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

namespace {

/// Running co-moments for one growing window.
struct CoMoments {
    std::size_t n = 0;
    double mean_x = 0.0, mean_y = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    double x0 = 0.0, y0 = 0.0;
    bool x_varies = false, y_varies = false;

    void add(double x, double y) {
        if (n == 0) {
            x0 = x;
            y0 = y;
        }
        x_varies |= x != x0;
        y_varies |= y != y0;
        ++n;
        const double inv = 1.0 / static_cast<double>(n);
        const double dx = x - mean_x;
        const double dy = y - mean_y;
        mean_x += dx * inv;
        mean_y += dy * inv;
        sxx += dx * (x - mean_x);
        syy += dy * (y - mean_y);
        sxy += dx * (y - mean_y);
    }

    [[nodiscard]] bool computable() const noexcept { return n >= 3 && x_varies && y_varies; }
    [[nodiscard]] double r() const { return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0); }
};

std::vector<std::size_t> window_ends(std::size_t n, const WindowScheme& w) {
    std::vector<std::size_t> ends;
    for (std::size_t e = w.initial_window; e <= n; e += w.step) ends.push_back(e);
    if (ends.empty() || ends.back() != n) ends.push_back(n);
    return ends;
}

} // namespace

ExpandingCorrelation expanding_median_r(std::span<const double> x, std::span<const double> y, const WindowScheme& w) {
    w.validate();
    if (x.size() != y.size()) throw Error("correlation inputs differ in length");

    std::vector<double> xs, ys;
    if (w.mode == WindowMode::seasonal4) {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!is_missing(x[i]) && !is_missing(y[i])) {
                xs.push_back(x[i]);
                ys.push_back(y[i]);
            }
    } else {
        xs.assign(x.begin(), x.end());
        ys.assign(y.begin(), y.end());
    }
    const std::size_t n = xs.size();
    if (n < w.initial_window)
        throw InsufficientData("series has " + std::to_string(n) + " samples, initial window needs " +
                               std::to_string(w.initial_window));

    ExpandingCorrelation out;
    CoMoments acc;
    std::size_t pos = 0;
    for (std::size_t end : window_ends(n, w)) {
        for (; pos < end; ++pos)
            if (!is_missing(xs[pos]) && !is_missing(ys[pos])) acc.add(xs[pos], ys[pos]);
        if (!acc.computable()) continue;
        const double r = acc.r();
        out.window_r.push_back(r);
        out.window_p.push_back(corr_p_value(r, acc.n));
    }
    if (out.window_r.empty()) throw Error("degenerate correlation: no computable window");
    out.median_r = median(out.window_r);
    out.median_p = median(out.window_p);
    return out;
}

MonthIndex required_precip_start(const MonthlySeries& target, std::size_t K) {
    return target.axis.start.plus(-static_cast<std::int64_t>(K) + 1);
}

namespace {

void check_history(const MonthlySeries& target, const MonthlySeries& precip, std::size_t K) {
    if (K < 1) throw Error("maximum accumulation K must be at least 1");
    const MonthIndex need = required_precip_start(target, K);
    if (precip.axis.start > need)
        throw InsufficientData("insufficient precipitation history: accumulations up to " + std::to_string(K) +
                               " months need precipitation from " + need.str() + " (data start " +
                               precip.axis.start.str() + ")");
    if (precip.axis.last() < target.axis.last())
        throw InsufficientData("precipitation ends at " + precip.axis.last().str() + " before target end " +
                               target.axis.last().str());
}

template <class PerK>
CorrelationProfile sweep(const MonthlySeries& target, const MonthlySeries& precip, std::size_t K, PerK&& per_k) {
    check_history(target, precip, K);
    // Only the span feeding target-aligned windows matters.
    const MonthlySeries history = precip.slice({required_precip_start(target, K), target.axis.last()});
    CorrelationProfile profile;
    profile.entries.resize(K);
    parallel_for(K, [&](std::size_t idx) {
        const std::size_t k = idx + 1;
        const MonthlySeries aligned = accumulate(history, k).slice(target.axis.range());
        ProfileEntry e = per_k(aligned);
        e.k = k;
        profile.entries[idx] = std::move(e);
    });
    return profile;
}

} // namespace

CorrelationProfile correlation_profile(const MonthlySeries& target, const MonthlySeries& precip, std::size_t K,
                                       const WindowScheme& w) {
    w.validate();
    auto profile = sweep(target, precip, K, [&](const MonthlySeries& aligned) {
        auto ex = expanding_median_r(target.values, aligned.values, w);
        ProfileEntry e;
        e.median_r = ex.median_r;
        e.median_p = ex.median_p;
        e.n_windows = ex.window_r.size();
        e.r_sd = sample_sd(ex.window_r);
        e.window_r = std::move(ex.window_r);
        return e;
    });
    profile.method = "median";
    return profile;
}

CorrelationProfile full_series_profile(const MonthlySeries& target, const MonthlySeries& precip, std::size_t K) {
    auto profile = sweep(target, precip, K, [&](const MonthlySeries& aligned) {
        std::size_t n = 0;
        for (std::size_t t = 0; t < aligned.size(); ++t)
            if (!is_missing(aligned.values[t]) && !is_missing(target.values[t])) ++n;
        ProfileEntry e;
        e.median_r = pearson_r(target.values, aligned.values);
        e.median_p = corr_p_value(e.median_r, n);
        e.n_windows = 1;
        e.r_sd = 0.0;
        e.window_r = {e.median_r};
        return e;
    });
    profile.method = "full";
    return profile;
}

OptimalPeriodResult optimal_period(const CorrelationProfile& profile, double alpha) {
    if (profile.entries.empty()) throw Error("empty correlation profile");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("significance level must lie in (0, 1)");
    OptimalPeriodResult result;
    result.method = profile.method;
    const ProfileEntry* strongest = nullptr;
    const ProfileEntry* best = nullptr;
    for (const auto& e : profile.entries) {
        if (is_missing(e.median_r)) continue;
        if (!strongest || e.median_r > strongest->median_r) strongest = &e;
        const bool qualifies = e.median_r > 0.0 && !is_missing(e.median_p) && e.median_p < alpha;
        if (qualifies && (!best || e.median_r > best->median_r)) best = &e;
    }
    auto choice = [](const ProfileEntry& e) { return PeriodChoice{e.k, e.median_r, e.median_p, e.r_sd}; };
    if (strongest) result.strongest = choice(*strongest);
    if (best) result.optimum = choice(*best);
    return result;
}

OptimalPeriodResult full_series_r(const MonthlySeries& target, const MonthlySeries& precip, std::size_t K,
                                  double alpha) {
    return optimal_period(full_series_profile(target, precip, K), alpha);
}

std::vector<double> autocorrelation(const MonthlySeries& s, std::size_t max_lag) {
    std::vector<double> out(max_lag + 1, kMissing);
    const std::span<const double> v(s.values);
    for (std::size_t lag = 0; lag <= max_lag && lag < v.size(); ++lag) {
        try {
            const double r = pearson_r(v.subspan(0, v.size() - lag), v.subspan(lag));
            out[lag] = lag == 0 ? 1.0 : r;
        } catch (const Error&) {
            // not computable at this lag
        }
    }
    return out;
}

} // namespace gwd
