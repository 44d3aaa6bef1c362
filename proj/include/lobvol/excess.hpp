#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lobvol/series.hpp"

namespace lobvol {

// Normalized best-quote imbalance, strictly inside (-1, 1) while both sides
// hold positive volume. Positive values mean more volume on the ask side.
struct ExcessSeries {
    std::int64_t interval = 10;
    std::int64_t start_timestamp = 0;
    std::vector<double> values;
    std::vector<std::uint8_t> valid;

    std::size_t size() const { return values.size(); }
};

// v_ex(t) = (V_ask - |V_bid|) / max(V_ask, |V_bid|), magnitudes on both
// sides; a slot is valid only when both inputs are.
ExcessSeries excess_volume(const VolumeSeries& ask, const VolumeSeries& bid);

double excess_value(double ask_volume, double bid_volume);

struct ExcessDistribution {
    double bin_width = 0.01;
    std::vector<std::size_t> counts;  // bins tiling (-1, 1) from the left edge
    std::size_t total = 0;
    // (threshold x, P(|v_ex| >= x))
    std::vector<std::pair<double, double>> tail_mass;
    // (center, mass within +-eps), at the distribution's jump locations
    std::vector<std::pair<double, double>> jump_mass;
    double jump_eps = 0.005;

    double bin_left(std::size_t i) const {
        return -1.0 + static_cast<double>(i) * bin_width;
    }
    double frequency(std::size_t i) const {
        return static_cast<double>(counts[i]) / static_cast<double>(total);
    }
};

inline constexpr double kDefaultTailThresholds[] = {0.75};
inline constexpr double kDefaultJumpCenters[] = {-0.5, -0.1, 0.0, 0.1, 0.5};

ExcessDistribution excess_distribution(
    const ExcessSeries& series, double bin_width = 0.01,
    std::span<const double> tail_thresholds = kDefaultTailThresholds,
    std::span<const double> jump_centers = kDefaultJumpCenters, double jump_eps = 0.005);

}  // namespace lobvol
