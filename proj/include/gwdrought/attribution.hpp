#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gwdrought/chrono_grid.hpp"

namespace gwd {

/// Complete-case regression data: one response, named predictors.
struct RegressionDesign {
    std::vector<double> response;
    std::vector<std::string> names;
    std::vector<std::vector<double>> predictors; ///< predictors[j][row]

    [[nodiscard]] std::size_t rows() const noexcept { return response.size(); }
    [[nodiscard]] std::size_t width() const noexcept { return predictors.size(); }

    /// Throws InsufficientData unless rows() >= width() + 2, gwd::Error on shape problems.
    void validate() const;
};

using NamedSeries = std::pair<std::string, MonthlySeries>;

/// Aligns series on the response months (optionally restricted to `period`)
/// and keeps rows where every value is present.
[[nodiscard]] RegressionDesign make_design(const MonthlySeries& response, std::span<const NamedSeries> predictors,
                                           const std::optional<MonthRange>& period = std::nullopt);

/// R^2 of the least-squares fit with intercept on predictor columns `subset`.
/// Empty subset gives 0. Throws gwd::Error("collinear predictors") for a
/// rank-deficient subset and gwd::Error("degenerate response") when the
/// response is constant.
[[nodiscard]] double ols_r2(const RegressionDesign& design, std::span<const std::size_t> subset);

/// LMG shares: each predictor's incremental R^2 averaged over all orderings.
/// Shares sum to the full-model R^2.
[[nodiscard]] std::vector<double> lmg_shares(const RegressionDesign& design);

struct PredictorImportance {
    std::string name;
    double share = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

struct RelativeImportance {
    std::vector<PredictorImportance> predictors;
    double model_r2 = 0.0;
    std::size_t runs = 0;
    double alpha = 0.05;
    std::uint64_t seed = 0;
};

/// Case-resampling bootstrap of LMG shares with percentile intervals at
/// alpha/2 and 1 - alpha/2. Run r draws from stream (r << 8 | attempt) of
/// `seed`; a degenerate resample is redrawn, up to 100 attempts per run.
[[nodiscard]] RelativeImportance bootstrap_ri(const RegressionDesign& design, std::size_t runs = 1000,
                                              double alpha = 0.05, std::uint64_t seed = 0);

struct PeriodAttribution {
    MonthRange period;
    std::optional<RelativeImportance> result;
    std::string error; ///< set when the period failed
};

using DesignBuilder = std::function<RegressionDesign(const MonthRange&)>;

/// Independent bootstrap per period with seed (seed xor period index).
/// A failing period records its error and does not stop the others.
[[nodiscard]] std::vector<PeriodAttribution> subperiod_compare(const DesignBuilder& build,
                                                               std::span<const MonthRange> periods,
                                                               std::size_t runs = 1000, double alpha = 0.05,
                                                               std::uint64_t seed = 0);

/// Type-7 (linear interpolation) sample quantile, q in [0, 1].
[[nodiscard]] double quantile(std::vector<double> v, double q);

} // namespace gwd
