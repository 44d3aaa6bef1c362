#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lobvol/series.hpp"

namespace lobvol {

struct CorrelationEstimate {
    enum class Kind { acf, pacf };
    Kind kind = Kind::acf;
    enum class InputKind { signed_returns, absolute_returns };
    InputKind input_kind = InputKind::signed_returns;

    int max_lag = 0;
    std::vector<double> values;             // index 0 = lag 1
    std::vector<std::size_t> n_effective;   // valid pair count per lag
    std::vector<double> noise_low;          // -z / sqrt(n_eff)
    std::vector<double> noise_high;
    std::vector<double> ci_low;             // bootstrap bounds; empty until attached
    std::vector<double> ci_high;
    double band_level = 0.99;

    double at(int lag) const { return values[static_cast<std::size_t>(lag - 1)]; }
    bool has_ci() const { return !ci_low.empty(); }
};

struct AcfOptions {
    double band_level = 0.99;
    unsigned max_threads = 0;  // 0 = LOBVOL_THREADS / hardware default
};

// Autocorrelation per lag: Pearson correlation over all pairs (r(t), r(t+k))
// with both members valid and in the same segment; each lag uses its own
// subsample means and variances.
CorrelationEstimate acf(const ReturnSeries& returns, int max_lag, const AcfOptions& options = {});

// Partial autocorrelation via the Durbin-Levinson recursion on the sample ACF.
CorrelationEstimate pacf(const ReturnSeries& returns, int max_lag,
                         const AcfOptions& options = {});

// Durbin-Levinson on an externally supplied autocorrelation sequence
// (rho[0] = lag 1). Throws NumericalError naming the lag if the recursion
// degenerates.
std::vector<double> durbin_levinson(const std::vector<double>& rho);

struct BootstrapOptions {
    int block_len = 0;      // 0 = ceil(sqrt(n))
    int replicates = 1000;  // >= 100
    double level = 0.99;
    std::uint64_t seed = 0;
    unsigned max_threads = 0;
};

// Moving-block bootstrap confidence bounds for the ACF, attached to the
// estimate in place. Deterministic given the seed regardless of thread count:
// replicate b draws its blocks from an rng stream derived from (seed, b).
void block_bootstrap_ci(const ReturnSeries& returns, CorrelationEstimate& estimate,
                        const BootstrapOptions& options);

struct MaDiagnosis {
    int cutoff_lag_acf = 0;    // last significant lag before the ACF settles
    bool tail_off_pacf = false;
    std::string suggested_model;  // "MA(p)", "AR(p)", "ARMA", "none", "inconclusive"
};

// Box-Jenkins style order diagnosis. The cutoff is the lag preceding the
// first window of `persistence_window` consecutive in-band lags.
MaDiagnosis ma_order_diagnosis(const CorrelationEstimate& acf_estimate,
                               const CorrelationEstimate& pacf_estimate,
                               int persistence_window = 5);

}  // namespace lobvol
