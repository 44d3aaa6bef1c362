#pragma once

#include <cstdint>
#include <vector>

#include "lobvol/series.hpp"

namespace lobvol {

// Deterministic synthetic processes used as independent oracles for the
// estimators. All randomness comes from the Philox counter generator, so a
// spec (kind, params, length, seed) pins the output bit for bit.
struct GeneratorSpec {
    enum class Kind {
        iid_normal,     // standard normal returns
        ma,             // MA(q) with coefficients ma_theta
        ar1,            // AR(1) with coefficient ar_phi, stationary start
        quote_flicker,  // volume series with one-slot quote excursions
        long_memory,    // fractional Gaussian noise, Hurst in (0.5, 1)
        clustered,      // iid magnitudes under a slow deterministic envelope
    };
    Kind kind = Kind::iid_normal;
    std::size_t length = 0;
    std::uint64_t seed = 0;

    std::vector<double> ma_theta;       // MA coefficients theta_1..theta_q
    double ar_phi = 0.5;                // |phi| < 1
    double hurst = 0.85;                // H in (0.5, 1)
    double envelope_period = 1000.0;    // slots per envelope cycle
    double envelope_amplitude = 4.0;    // peak multiplier is 1 + amplitude
    double flicker_prob = 0.1;
    std::vector<double> palette = {2.0, 8.0};  // palette[0] = resting volume
};

struct GeneratedSeries {
    bool is_volume = false;   // quote_flicker emits volumes, the rest returns
    ReturnSeries returns;
    VolumeSeries volumes;
    // quote_flicker: slots holding the excursion volume. The return pair of
    // flicker slot t is (r[t-1], r[t]) in the log-return indexing.
    std::vector<std::size_t> flicker_slots;
};

GeneratedSeries generate(const GeneratorSpec& spec);

// Closed-form model ACF at lags 1..max_lag for iid_normal, ma, ar1 and
// long_memory specs.
std::vector<double> theoretical_acf(const GeneratorSpec& spec, int max_lag);

// Fisher-Yates permutation driven by the same counter generator; used by the
// clustering null checks.
void deterministic_shuffle(std::vector<double>& values, std::uint64_t seed);

}  // namespace lobvol
