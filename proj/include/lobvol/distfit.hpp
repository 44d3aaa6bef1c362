#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lobvol/correlo.hpp"
#include "lobvol/series.hpp"

namespace lobvol {

struct AdTestResult {
    std::int64_t scale = 0;      // seconds; 0 when run on a bare sample
    std::size_t n = 0;
    double a_squared = 0.0;      // statistic adjusted by (1 + 4/n - 25/n^2)
    double critical = 0.0;       // critical value at `level`
    double level = 0.10;
    bool reject = false;
};

// Anderson-Darling test of composite normality (mean and variance estimated
// from the sample). The adjusted statistic is compared against asymptotic
// critical values at levels 10%, 5%, 2.5% and 1%.
AdTestResult ad_normality_test(std::span<const double> sample, double level = 0.10);

// One test per return series, each at its own time scale.
std::vector<AdTestResult> ad_normality_battery(std::span<const ReturnSeries> returns_by_scale,
                                               double level = 0.10);

struct PowerLawFit {
    struct SegmentFit {
        std::int64_t lag_lo = 0;  // inclusive
        std::int64_t lag_hi = 0;  // inclusive
        double amplitude = 0.0;   // k in C ~ k / tau^beta
        double beta = 0.0;
        double stderr_beta = 0.0;
        double r2 = 0.0;
        std::size_t used = 0;      // points entering the fit
        std::size_t excluded = 0;  // nonpositive ACF values dropped
        bool unreliable = false;   // more than 20% of the segment excluded
    };
    std::vector<std::int64_t> breakpoints;  // ordered, strictly inside the domain
    std::vector<SegmentFit> segments;       // breakpoints.size() + 1 entries
    std::int64_t lag_min = 1;
    std::int64_t lag_max = 0;
    double total_rss = 0.0;  // summed squared residuals in log-log space
};

// Straight-line least squares in (ln tau, ln C) per segment. Breakpoint b
// closes its left segment: domains are [lag_min, b1], (b1, b2], ...,
// (bk, lag_max]. Nonpositive ACF values are excluded and counted.
PowerLawFit fit_power_law(const CorrelationEstimate& acf_estimate,
                          std::span<const std::int64_t> breakpoints, std::int64_t lag_min,
                          std::int64_t lag_max);

// Chooses <= max_breaks breakpoints from the candidate set by total squared
// residual, preferring fewer breakpoints on ties.
PowerLawFit scan_breakpoints(const CorrelationEstimate& acf_estimate,
                             std::span<const std::int64_t> candidates, int max_breaks,
                             std::int64_t lag_min, std::int64_t lag_max);

}  // namespace lobvol
