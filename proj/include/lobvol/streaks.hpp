#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lobvol/decimal.hpp"
#include "lobvol/series.hpp"

namespace lobvol {

// One constant-volume episode at the best quote: the (price, volume) pair
// held unchanged for `duration` consecutive native time steps.
struct StreakRecord {
    std::size_t start_slot = 0;
    std::int64_t duration = 0;  // native sampling steps, >= 1
    Decimal volume;
    friend bool operator==(const StreakRecord&, const StreakRecord&) = default;
};

// Maximal runs of consecutive valid slots with an identical exact
// (price, volume) pair. A change of either volume or best price ends a
// streak, as does an invalid slot. Streaks cover every valid slot.
std::vector<StreakRecord> detect_streaks(const BestQuoteSeries& quotes);

// Same, over parallel price/volume arrays (misaligned lengths -> error).
std::vector<StreakRecord> detect_streaks(std::span<const Decimal> prices,
                                         std::span<const Decimal> volumes,
                                         std::span<const std::uint8_t> valid);

struct DurationDistribution {
    std::vector<std::int64_t> durations;  // sorted distinct durations
    std::vector<std::size_t> counts;      // histogram aligned with durations
    std::vector<double> cdf;              // running fraction of streaks
    std::size_t total = 0;

    // Nearest-rank q-th percentile of the duration sample.
    std::int64_t percentile(double q) const;
};

DurationDistribution streak_duration_distribution(std::span<const StreakRecord> records);

struct StreakFit {
    struct Bucket {
        std::int64_t tau = 0;
        double topk_mean = 0.0;
        std::size_t n_used = 0;    // how many volumes entered the mean
        bool sparse = false;       // fewer than k records available
    };
    std::vector<Bucket> buckets;
    double amplitude = 0.0;  // a in V(tau) ~ a * exp(-b * tau)
    double rate = 0.0;       // b
    double r2 = 0.0;         // in semi-log space
    int top_k = 10;
    std::int64_t d_max = 45;
};

// Mean of the k largest volumes per duration <= d_max, then least squares on
// ln(mean) = ln a - b * tau over the durations that have data.
StreakFit fit_extreme_volume_decay(std::span<const StreakRecord> records, int top_k = 10,
                                   std::int64_t d_max = 45);

}  // namespace lobvol
