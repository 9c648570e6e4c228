#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gwdrought/anomaly.hpp"
#include "gwdrought/chrono_grid.hpp"
#include "gwdrought/vegetation.hpp"

namespace gwd {

/// x_t = phi x_{t-1} + sd e_t with a stationary start x_0 = sd e_0 / sqrt(1 - phi^2).
/// e_t is CounterRng(seed).normal(t). Throws gwd::Error for |phi| >= 1.
[[nodiscard]] MonthlySeries gen_ar1(std::size_t n, double phi, double sd, std::uint64_t seed,
                                    MonthIndex start = {2000, 1});

/// Single-reservoir storage driven by precipitation and pumping.
struct BucketModelConfig {
    double recharge_coeff = 0.3;  ///< fraction of monthly precipitation entering storage
    std::vector<double> pumping;  ///< abstraction per month in mm; shorter than the input means 0 afterwards
    double decay = 0.05;          ///< fractional storage loss per month
    double init_storage = 0.0;    ///< mm
    double noise_sd = 0.0;        ///< mm
    std::uint64_t seed = 0;

    void validate() const;
};

/// S_{t+1} = (1 - decay) S_t + recharge_coeff P_t - pump_t + noise_t, labelled at
/// month t, returned minus its own monthly climatology over the whole axis.
/// Missing precipitation counts as zero recharge.
[[nodiscard]] MonthlySeries gen_bucket(const BucketModelConfig& cfg, const MonthlySeries& precip);

/// standardize(accumulate(precip, k_true)) + noise_sd * N(0, 1). The first
/// k_true - 1 months are missing.
[[nodiscard]] MonthlySeries gen_lagged_target(const MonthlySeries& precip, std::size_t k_true, double noise_sd,
                                              std::uint64_t seed);

/// Seasonal monthly precipitation totals (mm) with a monsoon peak in JJAS:
/// clim(m) + 0.3 clim(m) z_t, floored at 0, where z is white noise of `seed`.
[[nodiscard]] MonthlySeries gen_precip(const TimeAxis& axis, std::uint64_t seed);

struct RegionTruth {
    std::string construction;        ///< "lagged" or "bucket"
    std::size_t k_true = 0;          ///< lagged regions only
    std::string pumping_start;       ///< bucket regions only
    int ndvi_coupling_sign = 0;      ///< sign of the NDVI-GWSA link built into the data
};

/// A complete desk-scale dataset with ground truth.
struct SyntheticScenario {
    std::string label = "bundled";
    std::uint64_t seed = 0;
    MonthRange analysis{{2002, 1}, {2016, 12}}; ///< GRACE-like target period
    MonthRange wells_period{{1996, 1}, {2016, 12}};
    RegionMask regions;
    GriddedSeries precip;                 ///< monthly totals, mm
    GriddedSeries twsa;                   ///< mm, analysis period
    std::vector<GriddedSeries> sws;       ///< surface storage members, mm
    GriddedSeries gwsa;                   ///< truth, analysis period
    std::vector<StationRecord> stations;
    WeeklyField ndvi_weekly;              ///< fine grid
    IrrigationFraction irrigation;        ///< fine grid
    std::map<std::string, MonthlySeries> ndvi_signal; ///< per-region NDVI driver
    std::map<std::string, RegionTruth> truth;
    std::vector<MonthIndex> grace_gaps;   ///< months removed from TWSA
};

/// Three 1-degree regions (SI, NCI, NWI from south to north, two cells each):
/// SI and NCI follow lagged targets with k = 18 and 105, NWI follows a bucket
/// model whose pumping ramps up from 2012-01.
[[nodiscard]] SyntheticScenario build_scenario(std::uint64_t seed = 42);

} // namespace gwd
