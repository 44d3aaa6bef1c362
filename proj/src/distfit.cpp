#include "lobvol/distfit.hpp"

#include <algorithm>
#include <cmath>

#include "lobvol/errors.hpp"
#include "lobvol/mathx.hpp"
#include "lobvol/rng.hpp"

namespace lobvol {

namespace {

// Asymptotic upper-tail points of A^2 for normality with both parameters
// estimated, applied to the (1 + 4/n - 25/n^2)-adjusted statistic.
struct AdCritical {
    double level;
    double value;
};
constexpr AdCritical kAdTable[] = {
    {0.10, 0.631},
    {0.05, 0.752},
    {0.025, 0.873},
    {0.01, 1.035},
};

double ad_critical_value(double level) {
    for (const auto& row : kAdTable)
        if (std::fabs(row.level - level) < 1e-9) return row.value;
    throw ParameterError("ad_normality_test: no critical value tabulated for this level");
}

}  // namespace

AdTestResult ad_normality_test(std::span<const double> sample, double level) {
    const std::size_t n = sample.size();
    if (n < 8) throw InsufficientDataError("ad_normality_test: need at least 8 observations");

    double mean = 0.0;
    for (double v : sample) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : sample) ss += (v - mean) * (v - mean);
    double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0.0)) throw NumericalError("ad_normality_test: degenerate variance");

    std::vector<double> z(sample.begin(), sample.end());
    for (double& v : z) v = (v - mean) / sd;
    std::sort(z.begin(), z.end());

    // A^2 = -n - (1/n) * sum (2i-1) [ln F(z_i) + ln(1 - F(z_{n+1-i}))],
    // with both logs evaluated in log space to survive extreme outliers.
    double acc = 0.0;
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        double w = 2.0 * static_cast<double>(i + 1) - 1.0;
        acc += w * (log_normal_cdf(z[i]) + log_normal_cdf(-z[n - 1 - i]));
    }
    double a2 = -dn - acc / dn;
    double adjusted = a2 * (1.0 + 4.0 / dn - 25.0 / (dn * dn));

    AdTestResult result;
    result.n = n;
    result.level = level;
    result.a_squared = adjusted;
    result.critical = ad_critical_value(level);
    result.reject = adjusted > result.critical;
    return result;
}

std::vector<AdTestResult> ad_normality_battery(std::span<const ReturnSeries> returns_by_scale,
                                               double level) {
    std::vector<AdTestResult> results;
    results.reserve(returns_by_scale.size());
    for (const ReturnSeries& returns : returns_by_scale) {
        try {
            AdTestResult r = ad_normality_test(valid_values(returns), level);
            r.scale = returns.interval;
            results.push_back(r);
        } catch (const NumericalError& e) {
            throw NumericalError("scale " + std::to_string(returns.interval) + "s: " + e.what());
        } catch (const InsufficientDataError& e) {
            throw InsufficientDataError("scale " + std::to_string(returns.interval) +
                                        "s: " + e.what());
        }
    }
    return results;
}

namespace {

PowerLawFit::SegmentFit fit_segment(const CorrelationEstimate& acf_estimate,
                                    std::int64_t lag_lo, std::int64_t lag_hi) {
    PowerLawFit::SegmentFit seg;
    seg.lag_lo = lag_lo;
    seg.lag_hi = lag_hi;

    std::vector<double> xs, ys;
    for (std::int64_t lag = lag_lo; lag <= lag_hi; ++lag) {
        double c = acf_estimate.at(static_cast<int>(lag));
        if (std::isnan(c) || c <= 0.0) {
            ++seg.excluded;
            continue;
        }
        xs.push_back(std::log(static_cast<double>(lag)));
        ys.push_back(std::log(c));
    }
    seg.used = xs.size();
    if (seg.used < 3)
        throw InsufficientDataError("fit_power_law: segment [" + std::to_string(lag_lo) + "," +
                                    std::to_string(lag_hi) + "] has fewer than 3 usable points");
    std::size_t span = static_cast<std::size_t>(lag_hi - lag_lo + 1);
    seg.unreliable = seg.excluded * 5 > span;  // > 20% excluded

    LineFit line = fit_line(xs, ys);
    seg.amplitude = std::exp(line.intercept);
    seg.beta = -line.slope;
    seg.stderr_beta = line.stderr_slope;
    seg.r2 = line.r2;
    return seg;
}

double segment_rss(const CorrelationEstimate& acf_estimate,
                   const PowerLawFit::SegmentFit& seg) {
    double lnk = std::log(seg.amplitude);
    double rss = 0.0;
    for (std::int64_t lag = seg.lag_lo; lag <= seg.lag_hi; ++lag) {
        double c = acf_estimate.at(static_cast<int>(lag));
        if (std::isnan(c) || c <= 0.0) continue;
        double r = std::log(c) - (lnk - seg.beta * std::log(static_cast<double>(lag)));
        rss += r * r;
    }
    return rss;
}

// Advances idx to the next k-combination of {0..m-1}; false when exhausted.
bool next_combination(std::vector<std::size_t>& idx, std::size_t m) {
    std::size_t k = idx.size();
    std::size_t i = k;
    while (i > 0) {
        --i;
        if (idx[i] != i + m - k) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

PowerLawFit fit_power_law(const CorrelationEstimate& acf_estimate,
                          std::span<const std::int64_t> breakpoints, std::int64_t lag_min,
                          std::int64_t lag_max) {
    if (lag_min < 1 || lag_max > acf_estimate.max_lag || lag_min >= lag_max)
        throw ParameterError("fit_power_law: bad lag domain");
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (breakpoints[i] <= lag_min || breakpoints[i] >= lag_max)
            throw ParameterError("fit_power_law: breakpoint outside the open fit domain");
        if (i > 0 && breakpoints[i] <= breakpoints[i - 1])
            throw ParameterError("fit_power_law: breakpoints must be strictly increasing");
    }

    PowerLawFit fit;
    fit.breakpoints.assign(breakpoints.begin(), breakpoints.end());
    fit.lag_min = lag_min;
    fit.lag_max = lag_max;

    std::int64_t lo = lag_min;
    for (std::size_t i = 0; i <= breakpoints.size(); ++i) {
        std::int64_t hi = i < breakpoints.size() ? breakpoints[i] : lag_max;
        PowerLawFit::SegmentFit seg = fit_segment(acf_estimate, lo, hi);
        fit.total_rss += segment_rss(acf_estimate, seg);
        fit.segments.push_back(seg);
        lo = hi + 1;
    }
    return fit;
}

PowerLawFit scan_breakpoints(const CorrelationEstimate& acf_estimate,
                             std::span<const std::int64_t> candidates, int max_breaks,
                             std::int64_t lag_min, std::int64_t lag_max) {
    if (max_breaks < 0) throw ParameterError("scan_breakpoints: max_breaks must be >= 0");
    if (candidates.empty() && max_breaks > 0)
        throw ParameterError("scan_breakpoints: empty candidate set");

    std::vector<std::int64_t> usable;
    for (std::int64_t c : candidates)
        if (c > lag_min && c < lag_max) usable.push_back(c);
    std::sort(usable.begin(), usable.end());
    usable.erase(std::unique(usable.begin(), usable.end()), usable.end());

    // Subsets enumerated in order of ascending size, so ties resolve toward
    // fewer breakpoints.
    PowerLawFit best;
    bool have_best = false;
    const std::size_t m = usable.size();
    for (int size = 0; size <= max_breaks && size <= static_cast<int>(m); ++size) {
        std::vector<std::size_t> idx(static_cast<std::size_t>(size));
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        do {
            std::vector<std::int64_t> breaks;
            for (std::size_t i : idx) breaks.push_back(usable[i]);
            try {
                PowerLawFit fit = fit_power_law(acf_estimate, breaks, lag_min, lag_max);
                if (!have_best || fit.total_rss < best.total_rss - 1e-12) {
                    best = fit;
                    have_best = true;
                }
            } catch (const InsufficientDataError&) {
                // A candidate split can starve a segment; skip that subset.
            }
        } while (next_combination(idx, m));
    }
    if (!have_best)
        throw InsufficientDataError("scan_breakpoints: no candidate split yields a valid fit");
    return best;
}

}  // namespace lobvol
