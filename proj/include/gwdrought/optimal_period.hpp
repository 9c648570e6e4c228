#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gwdrought/chrono_grid.hpp"

namespace gwd {

enum class WindowMode {
    monthly,   ///< windows grow over consecutive months
    seasonal4, ///< windows grow over observed samples (4 per year for wells)
};

/// Expanding (prefix) window layout for the median-correlation method.
struct WindowScheme {
    std::size_t initial_window = 60;
    std::size_t step = 1;
    WindowMode mode = WindowMode::monthly;

    void validate() const;

    /// 60 monthly samples, the GRACE layout.
    static WindowScheme monthly(std::size_t initial = 60) { return {initial, 1, WindowMode::monthly}; }
    /// 40 observed samples, the well layout.
    static WindowScheme wells(std::size_t initial = 40) { return {initial, 1, WindowMode::seasonal4}; }
};

/// Sample Pearson correlation over pairwise-complete samples, clamped to [-1, 1].
/// Throws gwd::Error("degenerate correlation") when fewer than 3 pairs remain
/// or either side is constant.
[[nodiscard]] double pearson_r(std::span<const double> x, std::span<const double> y);

/// Two-sided p-value of a correlation under the Student-t null with n-2
/// degrees of freedom. |r| >= 1 gives 0.
[[nodiscard]] double corr_p_value(double r, std::size_t n);

struct ExpandingCorrelation {
    double median_r = kMissing;
    double median_p = kMissing;
    std::vector<double> window_r; ///< one per computable window, in window order
    std::vector<double> window_p;
};

/// Correlations over prefix windows [0, w0), [0, w0+step), ..., [0, n) and
/// their medians. In seasonal4 mode `n` counts complete pairs only; in
/// monthly mode it counts positions. Throws InsufficientData when n is below
/// the initial window and gwd::Error("degenerate correlation") when no window
/// is computable.
[[nodiscard]] ExpandingCorrelation expanding_median_r(std::span<const double> x, std::span<const double> y,
                                                      const WindowScheme& w);

struct ProfileEntry {
    std::size_t k = 1;
    double median_r = kMissing;
    double median_p = kMissing;
    std::size_t n_windows = 0;
    double r_sd = 0.0; ///< sample sd of the window r-values (0 for a single window)
    std::vector<double> window_r;
};

/// Median correlation per accumulation length k = 1..K.
struct CorrelationProfile {
    std::vector<ProfileEntry> entries;
    std::string method = "median";

    [[nodiscard]] std::size_t max_k() const noexcept { return entries.size(); }
};

/// First month of precipitation needed to profile `target` up to K months.
[[nodiscard]] MonthIndex required_precip_start(const MonthlySeries& target, std::size_t K);

/// For every k in 1..K: accumulate `precip` over k months, align to the
/// target axis and run expanding_median_r. Throws InsufficientData naming
/// the required start month when precipitation history is too short.
[[nodiscard]] CorrelationProfile correlation_profile(const MonthlySeries& target, const MonthlySeries& precip,
                                                     std::size_t K, const WindowScheme& w);

/// Same sweep with one whole-series correlation per k.
[[nodiscard]] CorrelationProfile full_series_profile(const MonthlySeries& target, const MonthlySeries& precip,
                                                     std::size_t K);

struct PeriodChoice {
    std::size_t k = 0;
    double median_r = kMissing;
    double median_p = kMissing;
    double r_sd = kMissing;
};

struct OptimalPeriodResult {
    /// Largest positive, significant median r (smallest k on ties); empty
    /// when no k qualifies ("no significant optimal period").
    std::optional<PeriodChoice> optimum;
    /// Unconstrained argmax of median r, reported as a diagnostic.
    PeriodChoice strongest;
    std::string method = "median";

    [[nodiscard]] bool significant() const noexcept { return optimum.has_value(); }
};

[[nodiscard]] OptimalPeriodResult optimal_period(const CorrelationProfile& profile, double alpha = 0.05);

/// Optimal period from whole-series correlations.
[[nodiscard]] OptimalPeriodResult full_series_r(const MonthlySeries& target, const MonthlySeries& precip,
                                                std::size_t K, double alpha = 0.05);

/// Lag-L autocorrelation for L = 0..max_lag; a lag is missing when its
/// correlation is not computable.
[[nodiscard]] std::vector<double> autocorrelation(const MonthlySeries& s, std::size_t max_lag);

/// Median with the even-count midpoint convention. Missing for empty input.
[[nodiscard]] double median(std::vector<double> v);

/// Sample standard deviation (n-1); 0 for fewer than two values.
[[nodiscard]] double sample_sd(std::span<const double> v);

} // namespace gwd
