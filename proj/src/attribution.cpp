#include "gwdrought/attribution.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "gwdrought/parallel.hpp"
#include "gwdrought/rng.hpp"

namespace gwd {

namespace {
constexpr std::size_t kMaxPredictors = 12;
constexpr int kMaxAttempts = 100;
} // namespace

void RegressionDesign::validate() const {
    if (names.size() != predictors.size()) throw Error("predictor names and columns differ in count");
    for (const auto& col : predictors)
        if (col.size() != response.size()) throw Error("predictor column length differs from response");
    if (predictors.size() > kMaxPredictors) throw Error("too many predictors for exhaustive LMG");
    if (rows() < width() + 2)
        throw InsufficientData("regression needs at least " + std::to_string(width() + 2) + " complete rows, have " +
                               std::to_string(rows()));
}

RegressionDesign make_design(const MonthlySeries& response, std::span<const NamedSeries> predictors,
                             const std::optional<MonthRange>& period) {
    RegressionDesign d;
    for (const auto& [name, s] : predictors) {
        d.names.push_back(name);
        d.predictors.emplace_back();
    }
    for (std::size_t t = 0; t < response.size(); ++t) {
        const MonthIndex m = response.axis.at(t);
        if (period && !period->contains(m)) continue;
        const double y = response.values[t];
        if (is_missing(y)) continue;
        std::vector<double> row;
        row.reserve(predictors.size());
        for (const auto& [name, s] : predictors) {
            const double v = s.at(m);
            if (is_missing(v)) break;
            row.push_back(v);
        }
        if (row.size() != predictors.size()) continue;
        d.response.push_back(y);
        for (std::size_t j = 0; j < row.size(); ++j) d.predictors[j].push_back(row[j]);
    }
    d.validate();
    return d;
}

double ols_r2(const RegressionDesign& design, std::span<const std::size_t> subset) {
    const auto n = static_cast<Eigen::Index>(design.rows());
    const auto& y = design.response;
    if (n < 2) throw Error("degenerate response: fewer than two rows");
    if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y.front(); }))
        throw Error("degenerate response: zero variance");
    if (subset.empty()) return 0.0;

    Eigen::VectorXd yc = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
    yc.array() -= yc.mean();
    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(subset.size()));
    for (std::size_t c = 0; c < subset.size(); ++c) {
        if (subset[c] >= design.width()) throw Error("predictor index out of range");
        const auto& col = design.predictors[subset[c]];
        x.col(static_cast<Eigen::Index>(c)) = Eigen::Map<const Eigen::VectorXd>(col.data(), n);
        x.col(static_cast<Eigen::Index>(c)).array() -= x.col(static_cast<Eigen::Index>(c)).mean();
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() < x.cols() || x.isZero(0.0)) throw Error("collinear predictors");

    const Eigen::VectorXd beta = qr.solve(yc);
    const double sse = (yc - x * beta).squaredNorm();
    const double sst = yc.squaredNorm();
    return std::clamp(1.0 - sse / sst, 0.0, 1.0);
}

std::vector<double> lmg_shares(const RegressionDesign& design) {
    design.validate();
    const std::size_t p = design.width();
    const std::size_t subsets = std::size_t{1} << p;

    std::vector<double> r2(subsets, 0.0);
    std::vector<std::size_t> members;
    for (std::size_t mask = 1; mask < subsets; ++mask) {
        members.clear();
        for (std::size_t j = 0; j < p; ++j)
            if (mask & (std::size_t{1} << j)) members.push_back(j);
        r2[mask] = ols_r2(design, members);
    }

    // Fraction of orderings in which exactly the s predictors of S precede j:
    // s! (p - s - 1)! / p!
    std::vector<double> weight(p, 0.0);
    for (std::size_t s = 0; s < p; ++s) {
        double w = 1.0 / static_cast<double>(p);
        for (std::size_t a = 1; a <= s; ++a) w *= static_cast<double>(a) / static_cast<double>(p - a);
        weight[s] = w;
    }

    std::vector<double> shares(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        const std::size_t bit = std::size_t{1} << j;
        for (std::size_t mask = 0; mask < subsets; ++mask) {
            if (mask & bit) continue;
            const auto s = static_cast<std::size_t>(std::popcount(mask));
            shares[j] += weight[s] * (r2[mask | bit] - r2[mask]);
        }
    }
    return shares;
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return kMissing;
    std::sort(v.begin(), v.end());
    const double h = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

RelativeImportance bootstrap_ri(const RegressionDesign& design, std::size_t runs, double alpha, std::uint64_t seed) {
    design.validate();
    if (runs < 1) throw Error("bootstrap needs at least one run");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("significance level must lie in (0, 1)");

    const std::vector<double> point = lmg_shares(design);
    const std::size_t p = design.width();
    const std::size_t n = design.rows();

    std::vector<std::vector<double>> draws(runs);
    parallel_for(runs, [&](std::size_t r) {
        RegressionDesign sample;
        sample.names = design.names;
        sample.predictors.assign(p, std::vector<double>(n));
        sample.response.resize(n);
        for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
            const CounterRng rng(seed, (static_cast<std::uint64_t>(r) << 8) | static_cast<std::uint64_t>(attempt));
            for (std::size_t row = 0; row < n; ++row) {
                const std::size_t src = rng.index(row, n);
                sample.response[row] = design.response[src];
                for (std::size_t j = 0; j < p; ++j) sample.predictors[j][row] = design.predictors[j][src];
            }
            try {
                draws[r] = lmg_shares(sample);
                return;
            } catch (const Error&) {
                // degenerate resample, redraw
            }
        }
        throw Error("bootstrap run " + std::to_string(r) + " stayed degenerate after " + std::to_string(kMaxAttempts) +
                    " resamples");
    });

    RelativeImportance ri;
    ri.runs = runs;
    ri.alpha = alpha;
    ri.seed = seed;
    for (std::size_t j = 0; j < p; ++j) {
        std::vector<double> col(runs);
        for (std::size_t r = 0; r < runs; ++r) col[r] = draws[r][j];
        ri.predictors.push_back({design.names[j], point[j], quantile(col, alpha / 2), quantile(col, 1.0 - alpha / 2)});
    }
    std::vector<std::size_t> all(p);
    std::iota(all.begin(), all.end(), std::size_t{0});
    ri.model_r2 = ols_r2(design, all);
    return ri;
}

std::vector<PeriodAttribution> subperiod_compare(const DesignBuilder& build, std::span<const MonthRange> periods,
                                                 std::size_t runs, double alpha, std::uint64_t seed) {
    std::vector<PeriodAttribution> out;
    for (std::size_t i = 0; i < periods.size(); ++i) {
        PeriodAttribution pa;
        pa.period = periods[i];
        try {
            pa.result = bootstrap_ri(build(periods[i]), runs, alpha, seed ^ static_cast<std::uint64_t>(i));
        } catch (const Error& e) {
            pa.error = e.what();
        }
        out.push_back(std::move(pa));
    }
    return out;
}

} // namespace gwd
