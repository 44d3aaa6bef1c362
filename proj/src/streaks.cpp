#include "lobvol/streaks.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lobvol/errors.hpp"
#include "lobvol/mathx.hpp"

namespace lobvol {

std::vector<StreakRecord> detect_streaks(std::span<const Decimal> prices,
                                         std::span<const Decimal> volumes,
                                         std::span<const std::uint8_t> valid) {
    if (prices.size() != volumes.size() || prices.size() != valid.size())
        throw AlignmentError("detect_streaks: price, volume and validity lengths differ");

    std::vector<StreakRecord> records;
    std::size_t i = 0;
    const std::size_t n = prices.size();
    while (i < n) {
        if (!valid[i]) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < n && valid[j] && prices[j] == prices[i] && volumes[j] == volumes[i]) ++j;
        records.push_back(
            StreakRecord{i, static_cast<std::int64_t>(j - i), volumes[i]});
        i = j;
    }
    return records;
}

std::vector<StreakRecord> detect_streaks(const BestQuoteSeries& quotes) {
    std::vector<Decimal> prices(quotes.slots.size());
    std::vector<Decimal> volumes(quotes.slots.size());
    std::vector<std::uint8_t> valid(quotes.slots.size());
    for (std::size_t i = 0; i < quotes.slots.size(); ++i) {
        prices[i] = quotes.slots[i].price;
        volumes[i] = quotes.slots[i].volume;
        valid[i] = quotes.slots[i].valid ? 1 : 0;
    }
    return detect_streaks(prices, volumes, valid);
}

DurationDistribution streak_duration_distribution(std::span<const StreakRecord> records) {
    if (records.empty())
        throw InsufficientDataError("streak_duration_distribution: no streaks");

    std::map<std::int64_t, std::size_t> hist;
    for (const auto& r : records) ++hist[r.duration];

    DurationDistribution dist;
    dist.total = records.size();
    double cum = 0.0;
    for (const auto& [dur, count] : hist) {
        dist.durations.push_back(dur);
        dist.counts.push_back(count);
        cum += static_cast<double>(count);
        dist.cdf.push_back(cum / static_cast<double>(dist.total));
    }
    return dist;
}

std::int64_t DurationDistribution::percentile(double q) const {
    if (!(q > 0.0 && q <= 100.0)) throw ParameterError("percentile q outside (0,100]");
    std::size_t rank = static_cast<std::size_t>(
        std::ceil(q / 100.0 * static_cast<double>(total)));
    rank = std::clamp<std::size_t>(rank, 1, total);
    std::size_t seen = 0;
    for (std::size_t i = 0; i < durations.size(); ++i) {
        seen += counts[i];
        if (seen >= rank) return durations[i];
    }
    return durations.back();
}

StreakFit fit_extreme_volume_decay(std::span<const StreakRecord> records, int top_k,
                                   std::int64_t d_max) {
    if (top_k < 1) throw ParameterError("top_k must be >= 1");
    if (d_max < 2) throw ParameterError("d_max must be >= 2");

    // Gather volumes (as doubles) per duration bucket.
    std::map<std::int64_t, std::vector<double>> by_duration;
    for (const auto& r : records)
        if (r.duration <= d_max) by_duration[r.duration].push_back(r.volume.to_double());
    if (by_duration.size() < 2)
        throw InsufficientDataError(
            "fit_extreme_volume_decay: need data at >= 2 distinct durations");

    StreakFit fit;
    fit.top_k = top_k;
    fit.d_max = d_max;

    std::vector<double> xs, ys;
    for (auto& [tau, vols] : by_duration) {
        std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(top_k), vols.size());
        std::partial_sort(vols.begin(), vols.begin() + static_cast<std::ptrdiff_t>(k),
                          vols.end(), std::greater<>());
        double mean = 0.0;
        for (std::size_t i = 0; i < k; ++i) mean += vols[i];
        mean /= static_cast<double>(k);

        StreakFit::Bucket bucket;
        bucket.tau = tau;
        bucket.topk_mean = mean;
        bucket.n_used = k;
        bucket.sparse = vols.size() < static_cast<std::size_t>(top_k);
        fit.buckets.push_back(bucket);

        if (mean > 0.0) {
            xs.push_back(static_cast<double>(tau));
            ys.push_back(std::log(mean));
        }
    }
    if (xs.size() < 2)
        throw InsufficientDataError("fit_extreme_volume_decay: fewer than 2 usable buckets");

    LineFit line = fit_line(xs, ys);
    fit.amplitude = std::exp(line.intercept);
    fit.rate = -line.slope;
    fit.r2 = line.r2;
    return fit;
}

}  // namespace lobvol
