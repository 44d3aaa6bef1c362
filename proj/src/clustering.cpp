#include "lobvol/clustering.hpp"

#include <algorithm>
#include <cmath>

#include "lobvol/errors.hpp"
#include "lobvol/mathx.hpp"

namespace lobvol {

double threshold_percentile(const ReturnSeries& abs_returns, double q) {
    if (!(q > 0.0 && q < 100.0)) throw ParameterError("percentile q outside (0,100)");
    std::vector<double> vals = valid_values(abs_returns);
    if (vals.size() < 100)
        throw InsufficientDataError("threshold_percentile: need >= 100 valid observations");
    std::sort(vals.begin(), vals.end());
    return nearest_rank(vals, q);
}

ClusterProbEstimate cluster_prob(const ReturnSeries& abs_returns, double q, int max_tau,
                                 double band_level) {
    if (max_tau < 1) throw ParameterError("max_tau must be >= 1");
    const std::size_t n = abs_returns.size();
    if (static_cast<std::size_t>(max_tau) >= n)
        throw ParameterError("max_tau must be below the series length");

    ClusterProbEstimate est;
    est.q = q;
    est.r_q = threshold_percentile(abs_returns, q);
    est.baseline = 1.0 - q / 100.0;
    est.max_tau = max_tau;
    est.band_level = band_level;

    const std::size_t t_max = static_cast<std::size_t>(max_tau);
    est.p.assign(t_max, std::nan(""));
    est.pairs.assign(t_max, 0);
    est.n.assign(t_max, 0);
    est.band_low.assign(t_max, std::nan(""));
    est.band_high.assign(t_max, std::nan(""));

    // Exceedance flags once, then per-tau counting walks the exceedance list
    // only.
    std::vector<std::uint8_t> exceed(n, 0);
    std::vector<std::size_t> exceed_at;
    for (std::size_t t = 0; t < n; ++t) {
        if (abs_returns.valid[t] && abs_returns.values[t] > est.r_q) {
            exceed[t] = 1;
            exceed_at.push_back(t);
        }
    }
    est.exceedances = exceed_at.size();
    est.low_sample = est.exceedances < 100;

    for (std::size_t ti = 0; ti < t_max; ++ti) {
        const std::size_t tau = ti + 1;
        std::size_t denom = 0, numer = 0;
        for (std::size_t t : exceed_at) {
            std::size_t partner = t + tau;
            if (partner >= n) continue;
            if (!abs_returns.valid[partner] ||
                abs_returns.segment[t] != abs_returns.segment[partner])
                continue;
            ++denom;
            numer += exceed[partner];
        }
        est.n[ti] = denom;
        est.pairs[ti] = numer;
        if (denom > 0) {
            est.p[ti] = static_cast<double>(numer) / static_cast<double>(denom);
            BinomialBand band = binomial_band(denom, est.baseline, band_level);
            est.band_low[ti] = static_cast<double>(band.k_lo) / static_cast<double>(denom);
            est.band_high[ti] = static_cast<double>(band.k_hi) / static_cast<double>(denom);
        }
    }
    return est;
}

}  // namespace lobvol
