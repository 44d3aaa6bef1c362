#include "lobvol/correlo.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lobvol/errors.hpp"
#include "lobvol/mathx.hpp"
#include "lobvol/rng.hpp"

namespace lobvol {

namespace {

struct PairSums {
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    std::size_t n = 0;
};

// Pearson correlation from accumulated pair sums; NaN when degenerate.
double pearson(const PairSums& s) {
    if (s.n < 2) return std::nan("");
    double n = static_cast<double>(s.n);
    double mx = s.sx / n;
    double my = s.sy / n;
    double vx = s.sxx / n - mx * mx;
    double vy = s.syy / n - my * my;
    if (vx <= 0.0 || vy <= 0.0) return std::nan("");
    double c = (s.sxy / n - mx * my) / std::sqrt(vx * vy);
    return std::clamp(c, -1.0, 1.0);
}

bool fully_valid_one_segment(const ReturnSeries& r) {
    if (r.size() == 0) return false;
    std::int32_t seg = r.segment[0];
    for (std::size_t i = 0; i < r.size(); ++i)
        if (!r.valid[i] || r.segment[i] != seg) return false;
    return true;
}

// Longest slot span covered by one segment (interior invalid slots count
// toward the extent; pairwise deletion can still pair across them).
std::size_t longest_segment_extent(const ReturnSeries& r) {
    std::map<std::int32_t, std::pair<std::size_t, std::size_t>> extent;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!r.valid[i]) continue;
        auto [it, fresh] = extent.try_emplace(r.segment[i], i, i);
        if (!fresh) it->second.second = i;
    }
    std::size_t best = 0;
    for (const auto& [seg, range] : extent)
        best = std::max(best, range.second - range.first + 1);
    return best;
}

// Core estimator; shared by acf() and the bootstrap replicates.
void acf_into(const ReturnSeries& r, int max_lag, unsigned max_threads,
              std::vector<double>& values, std::vector<std::size_t>& n_eff) {
    const std::size_t n = r.size();
    values.assign(static_cast<std::size_t>(max_lag), std::nan(""));
    n_eff.assign(static_cast<std::size_t>(max_lag), 0);

    const bool fast = fully_valid_one_segment(r);
    const double* v = r.values.data();

    std::vector<double> psum, psqr;
    if (fast) {
        psum.resize(n + 1, 0.0);
        psqr.resize(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            psum[i + 1] = psum[i] + v[i];
            psqr[i + 1] = psqr[i] + v[i] * v[i];
        }
    }

    parallel_for(static_cast<std::size_t>(max_lag), max_threads,
                 [&](std::size_t lo, std::size_t hi) {
        for (std::size_t li = lo; li < hi; ++li) {
            const std::size_t k = li + 1;
            if (k >= n) continue;
            PairSums s;
            if (fast) {
                const std::size_t m = n - k;
                double sxy = 0.0;
                for (std::size_t t = 0; t < m; ++t) sxy += v[t] * v[t + k];
                s.sx = psum[m];
                s.sxx = psqr[m];
                s.sy = psum[n] - psum[k];
                s.syy = psqr[n] - psqr[k];
                s.sxy = sxy;
                s.n = m;
            } else {
                for (std::size_t t = 0; t + k < n; ++t) {
                    if (!r.valid[t] || !r.valid[t + k] || r.segment[t] != r.segment[t + k])
                        continue;
                    double x = v[t], y = v[t + k];
                    s.sx += x;
                    s.sy += y;
                    s.sxx += x * x;
                    s.syy += y * y;
                    s.sxy += x * y;
                    ++s.n;
                }
            }
            values[li] = pearson(s);
            n_eff[li] = s.n;
        }
    });
}

void attach_noise_band(CorrelationEstimate& est) {
    const double z = normal_quantile(0.5 + est.band_level / 2.0);
    est.noise_low.resize(est.values.size());
    est.noise_high.resize(est.values.size());
    for (std::size_t i = 0; i < est.values.size(); ++i) {
        double half = est.n_effective[i] > 0
                          ? z / std::sqrt(static_cast<double>(est.n_effective[i]))
                          : std::nan("");
        est.noise_low[i] = -half;
        est.noise_high[i] = half;
    }
}

void check_acf_preconditions(const ReturnSeries& returns, int max_lag) {
    if (max_lag < 1) throw ParameterError("max_lag must be >= 1");
    std::size_t extent = longest_segment_extent(returns);
    if (static_cast<std::size_t>(max_lag) >= extent)
        throw ParameterError("max_lag " + std::to_string(max_lag) +
                             " not below the longest segment (" + std::to_string(extent) + ")");
    auto vals = valid_values(returns);
    if (vals.empty()) throw InsufficientDataError("acf: no valid observations");
    double mean = 0.0;
    for (double x : vals) mean += x;
    mean /= static_cast<double>(vals.size());
    double var = 0.0;
    for (double x : vals) var += (x - mean) * (x - mean);
    if (var == 0.0) throw NumericalError("correlation undefined: series has zero variance");
}

}  // namespace

CorrelationEstimate acf(const ReturnSeries& returns, int max_lag, const AcfOptions& options) {
    check_acf_preconditions(returns, max_lag);
    CorrelationEstimate est;
    est.kind = CorrelationEstimate::Kind::acf;
    est.input_kind = returns.absolute ? CorrelationEstimate::InputKind::absolute_returns
                                      : CorrelationEstimate::InputKind::signed_returns;
    est.max_lag = max_lag;
    est.band_level = options.band_level;
    acf_into(returns, max_lag, options.max_threads, est.values, est.n_effective);
    attach_noise_band(est);
    return est;
}

std::vector<double> durbin_levinson(const std::vector<double>& rho) {
    const std::size_t k_max = rho.size();
    std::vector<double> pacf_values(k_max, 0.0);
    if (k_max == 0) return pacf_values;

    std::vector<double> phi(k_max, 0.0), prev(k_max, 0.0);
    pacf_values[0] = rho[0];
    phi[0] = rho[0];
    double v = 1.0 - rho[0] * rho[0];

    for (std::size_t k = 2; k <= k_max; ++k) {
        if (!(v > 0.0))
            throw NumericalError("Durbin-Levinson degenerate at lag " + std::to_string(k) +
                                 ": sample ACF sequence is not positive definite");
        double num = rho[k - 1];
        for (std::size_t j = 1; j < k; ++j) num -= phi[j - 1] * rho[k - 1 - j];
        double refl = num / v;
        prev = phi;
        phi[k - 1] = refl;
        for (std::size_t j = 1; j < k; ++j) phi[j - 1] = prev[j - 1] - refl * prev[k - 1 - j];
        v *= (1.0 - refl * refl);
        pacf_values[k - 1] = refl;
    }
    return pacf_values;
}

CorrelationEstimate pacf(const ReturnSeries& returns, int max_lag, const AcfOptions& options) {
    CorrelationEstimate base = acf(returns, max_lag, options);
    for (double c : base.values)
        if (std::isnan(c))
            throw NumericalError("pacf: sample ACF undefined at some lag");

    CorrelationEstimate est = base;
    est.kind = CorrelationEstimate::Kind::pacf;
    est.values = durbin_levinson(base.values);
    for (auto& c : est.values) c = std::clamp(c, -1.0, 1.0);
    attach_noise_band(est);
    return est;
}

void block_bootstrap_ci(const ReturnSeries& returns, CorrelationEstimate& estimate,
                        const BootstrapOptions& options) {
    const std::size_t n = returns.size();
    if (options.replicates < 100) throw ParameterError("bootstrap: replicates must be >= 100");
    if (!(options.level > 0.0 && options.level < 1.0))
        throw ParameterError("bootstrap: level outside (0,1)");
    std::size_t block_len = options.block_len > 0
                                ? static_cast<std::size_t>(options.block_len)
                                : static_cast<std::size_t>(
                                      std::ceil(std::sqrt(static_cast<double>(n))));
    if (block_len > n) throw ParameterError("bootstrap: block length exceeds series length");

    const std::size_t max_lag = estimate.values.size();
    const std::size_t n_blocks = (n + block_len - 1) / block_len;
    const std::size_t n_starts = n - block_len + 1;
    const std::size_t reps = static_cast<std::size_t>(options.replicates);

    // replicate-major matrix of ACF values
    std::vector<double> rep_acf(reps * max_lag, std::nan(""));

    parallel_for(reps, options.max_threads, [&](std::size_t lo, std::size_t hi) {
        ReturnSeries sample;
        sample.side = returns.side;
        sample.interval = returns.interval;
        sample.absolute = returns.absolute;
        std::vector<double> values;
        std::vector<std::size_t> n_eff;
        for (std::size_t b = lo; b < hi; ++b) {
            // Per-replicate stream keyed by the replicate index: identical
            // resamples no matter how replicates are scheduled.
            CounterRng rng(options.seed, /*stream=*/b + 1);
            sample.values.clear();
            sample.valid.clear();
            sample.segment.clear();
            for (std::size_t blk = 0; blk < n_blocks; ++blk) {
                std::size_t start = rng.below_at(blk, n_starts);
                for (std::size_t i = 0; i < block_len && sample.values.size() < n; ++i) {
                    sample.values.push_back(returns.values[start + i]);
                    sample.valid.push_back(returns.valid[start + i]);
                    sample.segment.push_back(0);
                }
            }
            acf_into(sample, static_cast<int>(max_lag), 1, values, n_eff);
            for (std::size_t k = 0; k < max_lag; ++k) rep_acf[b * max_lag + k] = values[k];
        }
    });

    estimate.ci_low.assign(max_lag, std::nan(""));
    estimate.ci_high.assign(max_lag, std::nan(""));
    const double alpha = (1.0 - options.level) / 2.0;
    std::vector<double> column;
    for (std::size_t k = 0; k < max_lag; ++k) {
        column.clear();
        for (std::size_t b = 0; b < reps; ++b) {
            double c = rep_acf[b * max_lag + k];
            if (!std::isnan(c)) column.push_back(c);
        }
        if (column.empty()) continue;
        std::sort(column.begin(), column.end());
        estimate.ci_low[k] = nearest_rank(column, 100.0 * alpha);
        estimate.ci_high[k] = nearest_rank(column, 100.0 * (1.0 - alpha));
    }
}

namespace {

// Lag preceding the first run of `window` consecutive in-band lags; -1 when
// the series never settles inside the band.
int settle_cutoff(const CorrelationEstimate& est, int window) {
    const int k_max = static_cast<int>(est.values.size());
    int run = 0;
    for (int k = 1; k <= k_max; ++k) {
        double c = est.at(k);
        double hi = est.noise_high[static_cast<std::size_t>(k - 1)];
        bool inside = !std::isnan(c) && std::fabs(c) <= hi;
        run = inside ? run + 1 : 0;
        if (run == window) return k - window;
    }
    return -1;
}

}  // namespace

MaDiagnosis ma_order_diagnosis(const CorrelationEstimate& acf_estimate,
                               const CorrelationEstimate& pacf_estimate,
                               int persistence_window) {
    if (acf_estimate.values.size() != pacf_estimate.values.size())
        throw ParameterError("ma_order_diagnosis: estimates disagree on max_lag");
    if (persistence_window < 1) throw ParameterError("persistence window must be >= 1");

    const int c_acf = settle_cutoff(acf_estimate, persistence_window);
    const int c_pacf = settle_cutoff(pacf_estimate, persistence_window);
    const bool acf_cuts = c_acf >= 0;
    const bool pacf_cuts = c_pacf >= 0;

    MaDiagnosis d;
    d.cutoff_lag_acf = std::max(c_acf, 0);
    d.tail_off_pacf = !pacf_cuts || (acf_cuts && c_pacf > c_acf);

    if (acf_cuts && c_acf == 0 && pacf_cuts && c_pacf == 0) {
        d.suggested_model = "none";
    } else if (acf_cuts && c_acf >= 1 && d.tail_off_pacf) {
        d.suggested_model = "MA(" + std::to_string(c_acf) + ")";
    } else if (pacf_cuts && c_pacf >= 1 && (!acf_cuts || c_acf > c_pacf)) {
        d.suggested_model = "AR(" + std::to_string(c_pacf) + ")";
    } else if (!acf_cuts && !pacf_cuts) {
        d.suggested_model = "ARMA";
    } else {
        d.suggested_model = "inconclusive";
    }
    return d;
}

}  // namespace lobvol
