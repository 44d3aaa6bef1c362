#include "lobvol/synth.hpp"

#include <cmath>
#include <complex>

#include "lobvol/errors.hpp"
#include "lobvol/fft.hpp"
#include "lobvol/rng.hpp"

namespace lobvol {

namespace {

ReturnSeries blank_returns(std::size_t n) {
    ReturnSeries out;
    out.interval = 10;
    out.values.assign(n, 0.0);
    out.valid.assign(n, 1);
    out.segment.assign(n, 0);
    return out;
}

void check_spec(const GeneratorSpec& spec) {
    if (spec.length == 0) throw ParameterError("generator: length must be positive");
    switch (spec.kind) {
        case GeneratorSpec::Kind::ma:
            if (spec.ma_theta.empty()) throw ParameterError("ma: needs coefficients");
            for (double t : spec.ma_theta)
                if (!std::isfinite(t)) throw ParameterError("ma: non-finite coefficient");
            break;
        case GeneratorSpec::Kind::ar1:
            if (!(std::fabs(spec.ar_phi) < 1.0))
                throw ParameterError("ar1: |phi| must be < 1");
            break;
        case GeneratorSpec::Kind::long_memory:
            if (!(spec.hurst > 0.5 && spec.hurst < 1.0))
                throw ParameterError("long_memory: Hurst must lie in (0.5, 1)");
            break;
        case GeneratorSpec::Kind::quote_flicker:
            if (spec.palette.size() < 2)
                throw ParameterError("quote_flicker: palette needs a base and an excursion");
            for (double v : spec.palette)
                if (!(v > 0.0)) throw ParameterError("quote_flicker: volumes must be positive");
            if (!(spec.flicker_prob > 0.0 && spec.flicker_prob < 1.0))
                throw ParameterError("quote_flicker: probability outside (0,1)");
            break;
        case GeneratorSpec::Kind::clustered:
            if (!(spec.envelope_period > 1.0))
                throw ParameterError("clustered: envelope period must exceed 1 slot");
            if (!(spec.envelope_amplitude > 0.0))
                throw ParameterError("clustered: envelope amplitude must be positive");
            break;
        case GeneratorSpec::Kind::iid_normal:
            break;
    }
}

GeneratedSeries generate_iid(const GeneratorSpec& spec) {
    CounterRng rng(spec.seed);
    GeneratedSeries out;
    out.returns = blank_returns(spec.length);
    for (std::size_t i = 0; i < spec.length; ++i)
        out.returns.values[i] = rng.normal_at(i);
    return out;
}

GeneratedSeries generate_ma(const GeneratorSpec& spec) {
    CounterRng rng(spec.seed);
    const std::size_t q = spec.ma_theta.size();
    const std::size_t n = spec.length;
    std::vector<double> eps(n + q);
    for (std::size_t i = 0; i < eps.size(); ++i) eps[i] = rng.normal_at(i);

    GeneratedSeries out;
    out.returns = blank_returns(n);
    for (std::size_t t = 0; t < n; ++t) {
        double x = eps[t + q];
        for (std::size_t j = 1; j <= q; ++j) x += spec.ma_theta[j - 1] * eps[t + q - j];
        out.returns.values[t] = x;
    }
    return out;
}

GeneratedSeries generate_ar1(const GeneratorSpec& spec) {
    CounterRng rng(spec.seed);
    GeneratedSeries out;
    out.returns = blank_returns(spec.length);
    const double phi = spec.ar_phi;
    double x = rng.normal_at(0) / std::sqrt(1.0 - phi * phi);  // stationary start
    out.returns.values[0] = x;
    for (std::size_t t = 1; t < spec.length; ++t) {
        x = phi * x + rng.normal_at(t);
        out.returns.values[t] = x;
    }
    return out;
}

double fgn_autocov(double hurst, double k) {
    double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) +
                  std::pow(std::fabs(k - 1.0), h2));
}

// Exact circulant covariance embedding: the sampled path has the fGn
// autocovariance exactly, not asymptotically.
GeneratedSeries generate_long_memory(const GeneratorSpec& spec) {
    const std::size_t n = spec.length;
    const std::size_t m = next_pow2(n);
    const std::size_t n2 = 2 * m;

    std::vector<std::complex<double>> circ(n2);
    for (std::size_t k = 0; k <= m; ++k)
        circ[k] = fgn_autocov(spec.hurst, static_cast<double>(k));
    for (std::size_t k = 1; k < m; ++k) circ[n2 - k] = circ[k];
    fft(circ, false);

    CounterRng rng(spec.seed);
    std::vector<std::complex<double>> spectrum(n2);
    const double dn2 = static_cast<double>(n2);
    for (std::size_t j = 0; j <= m; ++j) {
        double lambda = circ[j].real();
        if (lambda < 0.0) {
            if (lambda < -1e-8 * dn2)
                throw NumericalError("long_memory: circulant embedding not nonnegative");
            lambda = 0.0;
        }
        if (j == 0) {
            spectrum[0] = std::sqrt(lambda / dn2) * rng.normal_at(0);
        } else if (j == m) {
            spectrum[m] = std::sqrt(lambda / dn2) * rng.normal_at(1);
        } else {
            double scale = std::sqrt(lambda / (2.0 * dn2));
            std::complex<double> z(rng.normal_at(2 * j), rng.normal_at(2 * j + 1));
            spectrum[j] = scale * z;
            spectrum[n2 - j] = std::conj(spectrum[j]);
        }
    }
    fft(spectrum, false);

    GeneratedSeries out;
    out.returns = blank_returns(n);
    for (std::size_t t = 0; t < n; ++t) out.returns.values[t] = spectrum[t].real();
    return out;
}

GeneratedSeries generate_clustered(const GeneratorSpec& spec) {
    CounterRng rng(spec.seed);
    GeneratedSeries out;
    out.returns = blank_returns(spec.length);
    for (std::size_t t = 0; t < spec.length; ++t) {
        double phase = std::sin(M_PI * static_cast<double>(t) / spec.envelope_period);
        double envelope = 1.0 + spec.envelope_amplitude * phase * phase;
        out.returns.values[t] = envelope * rng.normal_at(t);
    }
    return out;
}

GeneratedSeries generate_quote_flicker(const GeneratorSpec& spec) {
    CounterRng rng(spec.seed);
    const std::size_t n = spec.length;
    const double base = spec.palette[0];
    const std::size_t excursions = spec.palette.size() - 1;

    GeneratedSeries out;
    out.is_volume = true;
    out.volumes.side = Side::ask;
    out.volumes.interval = 10;
    out.volumes.values.assign(n, base);
    out.volumes.valid.assign(n, 1);
    out.volumes.segment.assign(n, 0);

    // A flicker holds for exactly one slot, then the quote reverts; flickers
    // never touch, so every excursion yields the (+r, -r) return pair.
    for (std::size_t t = 1; t + 1 < n; ++t) {
        if (out.volumes.values[t - 1] != base) continue;
        if (rng.uniform_at(2 * t) < spec.flicker_prob) {
            std::size_t pick = excursions == 1 ? 0 : rng.below_at(2 * t + 1, excursions);
            double v = spec.palette[1 + pick];
            if (v == base) continue;
            out.volumes.values[t] = v;
            out.flicker_slots.push_back(t);
        }
    }
    return out;
}

}  // namespace

GeneratedSeries generate(const GeneratorSpec& spec) {
    check_spec(spec);
    switch (spec.kind) {
        case GeneratorSpec::Kind::iid_normal: return generate_iid(spec);
        case GeneratorSpec::Kind::ma: return generate_ma(spec);
        case GeneratorSpec::Kind::ar1: return generate_ar1(spec);
        case GeneratorSpec::Kind::quote_flicker: return generate_quote_flicker(spec);
        case GeneratorSpec::Kind::long_memory: return generate_long_memory(spec);
        case GeneratorSpec::Kind::clustered: return generate_clustered(spec);
    }
    throw ParameterError("generator: unknown kind");
}

std::vector<double> theoretical_acf(const GeneratorSpec& spec, int max_lag) {
    if (max_lag < 1) throw ParameterError("theoretical_acf: max_lag must be >= 1");
    std::vector<double> acf(static_cast<std::size_t>(max_lag), 0.0);
    switch (spec.kind) {
        case GeneratorSpec::Kind::iid_normal:
            break;
        case GeneratorSpec::Kind::ma: {
            const std::size_t q = spec.ma_theta.size();
            std::vector<double> theta(q + 1, 1.0);  // theta_0 = 1
            for (std::size_t j = 1; j <= q; ++j) theta[j] = spec.ma_theta[j - 1];
            double denom = 0.0;
            for (double t : theta) denom += t * t;
            for (int k = 1; k <= max_lag; ++k) {
                if (static_cast<std::size_t>(k) > q) break;
                double num = 0.0;
                for (std::size_t j = 0; j + static_cast<std::size_t>(k) <= q; ++j)
                    num += theta[j] * theta[j + static_cast<std::size_t>(k)];
                acf[static_cast<std::size_t>(k - 1)] = num / denom;
            }
            break;
        }
        case GeneratorSpec::Kind::ar1:
            for (int k = 1; k <= max_lag; ++k)
                acf[static_cast<std::size_t>(k - 1)] = std::pow(spec.ar_phi, k);
            break;
        case GeneratorSpec::Kind::long_memory:
            for (int k = 1; k <= max_lag; ++k)
                acf[static_cast<std::size_t>(k - 1)] =
                    fgn_autocov(spec.hurst, static_cast<double>(k));
            break;
        default:
            throw ParameterError("theoretical_acf: unsupported generator kind");
    }
    return acf;
}

void deterministic_shuffle(std::vector<double>& values, std::uint64_t seed) {
    CounterRng rng(seed);
    for (std::size_t i = values.size(); i > 1; --i) {
        std::size_t j = rng.below_at(i, i);
        std::swap(values[i - 1], values[j]);
    }
}

}  // namespace lobvol
