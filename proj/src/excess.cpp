#include "lobvol/excess.hpp"

#include <algorithm>
#include <cmath>

#include "lobvol/errors.hpp"

namespace lobvol {

double excess_value(double ask_volume, double bid_volume) {
    double a = std::fabs(ask_volume);
    double b = std::fabs(bid_volume);
    return (a - b) / std::max(a, b);
}

ExcessSeries excess_volume(const VolumeSeries& ask, const VolumeSeries& bid) {
    if (ask.size() != bid.size() || ask.interval != bid.interval ||
        ask.start_timestamp != bid.start_timestamp)
        throw AlignmentError("excess_volume: ask and bid series are not aligned");

    ExcessSeries out;
    out.interval = ask.interval;
    out.start_timestamp = ask.start_timestamp;
    out.values.assign(ask.size(), 0.0);
    out.valid.assign(ask.size(), 0);
    for (std::size_t i = 0; i < ask.size(); ++i) {
        if (!ask.valid[i] || !bid.valid[i]) continue;
        out.values[i] = excess_value(ask.values[i], bid.values[i]);
        out.valid[i] = 1;
    }
    return out;
}

ExcessDistribution excess_distribution(const ExcessSeries& series, double bin_width,
                                       std::span<const double> tail_thresholds,
                                       std::span<const double> jump_centers, double jump_eps) {
    if (!(bin_width > 0.0 && bin_width < 2.0))
        throw ParameterError("excess_distribution: bin width outside (0,2)");

    std::vector<double> vals;
    for (std::size_t i = 0; i < series.size(); ++i)
        if (series.valid[i]) vals.push_back(series.values[i]);
    if (vals.empty()) throw InsufficientDataError("excess_distribution: no valid entries");

    ExcessDistribution dist;
    dist.bin_width = bin_width;
    dist.jump_eps = jump_eps;
    dist.total = vals.size();
    const std::size_t n_bins = static_cast<std::size_t>(std::ceil(2.0 / bin_width));
    dist.counts.assign(n_bins, 0);
    for (double v : vals) {
        auto bin = static_cast<std::size_t>(
            std::clamp((v + 1.0) / bin_width, 0.0, static_cast<double>(n_bins - 1)));
        ++dist.counts[bin];
    }

    const double total = static_cast<double>(dist.total);
    for (double x : tail_thresholds) {
        std::size_t hits = 0;
        for (double v : vals) hits += std::fabs(v) >= x;
        dist.tail_mass.emplace_back(x, static_cast<double>(hits) / total);
    }
    for (double c : jump_centers) {
        std::size_t hits = 0;
        for (double v : vals) hits += std::fabs(v - c) <= jump_eps;
        dist.jump_mass.emplace_back(c, static_cast<double>(hits) / total);
    }
    return dist;
}

}  // namespace lobvol
