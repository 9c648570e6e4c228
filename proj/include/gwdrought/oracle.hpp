#pragma once

// Brute-force reference computations. They share no code with the
// production kernels: sums run in long double and in a different order,
// runs are found by exhaustive (start, end) enumeration, LMG walks every
// predictor ordering, and least squares goes through normal equations.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gwdrought/attribution.hpp"
#include "gwdrought/chrono_grid.hpp"
#include "gwdrought/drought.hpp"

namespace gwd::oracle {

/// Trailing window sums, missing when the window is short or holds a gap.
[[nodiscard]] std::vector<double> rolling_sum(const std::vector<double>& x, std::size_t k);

/// Pearson r from long-double direct sums over pairwise-complete samples.
[[nodiscard]] double pearson(const std::vector<double>& x, const std::vector<double>& y);

/// Interpolated value at each interior gap by scanning to its neighbours.
[[nodiscard]] std::vector<double> linear_fill(const std::vector<double>& x);

struct Run {
    std::size_t first = 0;
    std::size_t last = 0;
    friend bool operator==(const Run&, const Run&) = default;
};

/// Every (first, last) whose values are all negative and whose neighbours
/// are not, kept when long enough. O(n^2) enumeration.
[[nodiscard]] std::vector<Run> maximal_negative_runs(const std::vector<double>& x, std::size_t min_run);

/// R^2 through centred normal equations solved by Gaussian elimination in long double.
[[nodiscard]] double r2_normal_equations(const RegressionDesign& d, const std::vector<std::size_t>& subset);

/// LMG shares by averaging incremental R^2 over all p! orderings.
[[nodiscard]] std::vector<double> lmg_all_orderings(const RegressionDesign& d);

/// Two-sided p-value of r from Simpson integration of the Student-t density.
[[nodiscard]] double t_test_p_value(double r, std::size_t n);

/// Production functions checked by the suite; tests swap in perturbed versions.
struct Targets {
    std::function<MonthlySeries(const MonthlySeries&, std::size_t)> accumulate;
    std::function<double(std::span<const double>, std::span<const double>)> pearson_r;
    std::function<MonthlySeries(const MonthlySeries&)> fill_gaps_linear;
    std::function<DroughtCatalog(const MonthlySeries&, int)> detect_events;
    std::function<double(const RegressionDesign&, std::span<const std::size_t>)> ols_r2;
    std::function<std::vector<double>(const RegressionDesign&)> lmg_shares;
    std::function<double(double, std::size_t)> corr_p_value;

    /// The library's own implementations.
    static Targets production();
};

struct Check {
    std::string op;
    std::size_t cases = 0;
    double max_abs_dev = 0.0;
    double tolerance = 0.0;
    bool passed = true;
    std::uint64_t failing_seed = 0; ///< first case seed beyond tolerance
};

struct Report {
    std::vector<Check> checks;
    [[nodiscard]] bool passed() const noexcept;
};

struct SuiteOptions {
    std::uint64_t seed = 20240101;
    std::size_t cases = 200; ///< random cases per op
};

/// Runs every oracle against `targets` on seeded random inputs.
[[nodiscard]] Report run_suite(const Targets& targets = Targets::production(), const SuiteOptions& opt = {});

} // namespace gwd::oracle
