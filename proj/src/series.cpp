#include "lobvol/series.hpp"

#include <algorithm>
#include <cmath>

#include "lobvol/errors.hpp"
#include "lobvol/mathx.hpp"

namespace lobvol {

std::size_t VolumeSeries::valid_count() const {
    std::size_t n = 0;
    for (auto v : valid) n += v;
    return n;
}

std::size_t ReturnSeries::valid_count() const {
    std::size_t n = 0;
    for (auto v : valid) n += v;
    return n;
}

BestQuoteSeries best_quote_series(const SnapshotStream& stream, Side side) {
    BestQuoteSeries out;
    out.side = side;
    out.interval = stream.nominal_interval;
    if (stream.records.empty()) return out;

    const std::int64_t t0 = stream.records.front().timestamp;
    const std::int64_t interval = stream.nominal_interval;
    const std::int64_t span = stream.records.back().timestamp - t0;
    const std::size_t slots = static_cast<std::size_t>((span + interval / 2) / interval) + 1;

    out.start_timestamp = t0;
    out.slots.assign(slots, QuoteSlot{});
    out.segment.assign(slots, -1);

    for (std::size_t seg = 0; seg < stream.segments.size(); ++seg) {
        const Segment& range = stream.segments[seg];
        for (std::size_t i = range.first; i <= range.last; ++i) {
            const SnapshotRecord& record = stream.records[i];
            // Nearest slot; a later record landing on an occupied slot wins
            // (closing value of that slot).
            std::int64_t offset = record.timestamp - t0;
            std::size_t slot = static_cast<std::size_t>((offset + interval / 2) / interval);
            if (slot >= slots) slot = slots - 1;
            const BookLevel& best = side == Side::ask ? record.best_ask() : record.best_bid();
            out.slots[slot] = QuoteSlot{best.price, best.volume, true};
            out.segment[slot] = static_cast<std::int32_t>(seg);
        }
    }
    return out;
}

VolumeSeries to_volume_series(const BestQuoteSeries& quotes) {
    VolumeSeries out;
    out.side = quotes.side;
    out.interval = quotes.interval;
    out.start_timestamp = quotes.start_timestamp;
    out.values.resize(quotes.slots.size(), 0.0);
    out.valid.resize(quotes.slots.size(), 0);
    out.segment = quotes.segment;
    for (std::size_t i = 0; i < quotes.slots.size(); ++i) {
        const QuoteSlot& slot = quotes.slots[i];
        // A zero volume cannot stand at a best quote; treat as invalid.
        if (slot.valid && slot.volume.is_positive()) {
            out.values[i] = slot.volume.to_double();
            out.valid[i] = 1;
        } else {
            out.segment[i] = -1;
        }
    }
    return out;
}

VolumeSeries best_volume_series(const SnapshotStream& stream, Side side) {
    return to_volume_series(best_quote_series(stream, side));
}

VolumeSeries resample(const VolumeSeries& series, std::int64_t target_interval) {
    if (target_interval <= 0 || target_interval % series.interval != 0)
        throw ParameterError("resample: target interval must be a positive multiple of " +
                             std::to_string(series.interval) + "s");
    const std::size_t factor = static_cast<std::size_t>(target_interval / series.interval);
    if (factor == 1) return series;

    VolumeSeries out;
    out.side = series.side;
    out.interval = target_interval;
    out.start_timestamp = series.start_timestamp;
    const std::size_t n_out = (series.size() + factor - 1) / factor;
    out.values.assign(n_out, 0.0);
    out.valid.assign(n_out, 0);
    out.segment.assign(n_out, -1);

    for (std::size_t j = 0; j < n_out; ++j) {
        std::size_t lo = j * factor;
        std::size_t hi = std::min(series.size(), lo + factor);
        for (std::size_t i = hi; i > lo; --i) {
            if (series.valid[i - 1]) {
                out.values[j] = series.values[i - 1];
                out.valid[j] = 1;
                out.segment[j] = series.segment[i - 1];
                break;
            }
        }
    }
    return out;
}

ReturnSeries log_returns(const VolumeSeries& series) {
    ReturnSeries out;
    out.side = series.side;
    out.interval = series.interval;
    out.start_timestamp = series.start_timestamp;
    if (series.size() < 2) return out;

    const std::size_t n = series.size() - 1;
    out.values.assign(n, 0.0);
    out.valid.assign(n, 0);
    out.segment.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (series.valid[i] && series.valid[i + 1] && series.segment[i] == series.segment[i + 1]) {
            out.values[i] = std::log(series.values[i + 1]) - std::log(series.values[i]);
            out.valid[i] = 1;
            out.segment[i] = series.segment[i];
        }
    }
    return out;
}

ReturnSeries absolute_returns(const ReturnSeries& returns) {
    ReturnSeries out = returns;
    out.absolute = true;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        if (out.valid[i]) out.values[i] = std::fabs(out.values[i]);
    return out;
}

std::vector<double> valid_values(const VolumeSeries& series) {
    std::vector<double> out;
    out.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i)
        if (series.valid[i]) out.push_back(series.values[i]);
    return out;
}

std::vector<double> valid_values(const ReturnSeries& returns) {
    std::vector<double> out;
    out.reserve(returns.size());
    for (std::size_t i = 0; i < returns.size(); ++i)
        if (returns.valid[i]) out.push_back(returns.values[i]);
    return out;
}

DescriptiveStats descriptive_stats(std::span<const double> values) {
    if (values.size() < 2)
        throw InsufficientDataError("descriptive_stats: need at least 2 valid entries");

    DescriptiveStats stats;
    stats.n = values.size();
    const double n = static_cast<double>(values.size());

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        double d = v - mean;
        double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    stats.mean = mean;
    stats.std_dev = std::sqrt(m2 / (n - 1.0));
    m2 /= n;
    m3 /= n;
    m4 /= n;
    stats.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    stats.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    stats.median = nearest_rank(sorted, 50.0);
    stats.iqr = nearest_rank(sorted, 75.0) - nearest_rank(sorted, 25.0);
    return stats;
}

DescriptiveStats descriptive_stats(const VolumeSeries& series) {
    return descriptive_stats(valid_values(series));
}

std::vector<std::pair<double, double>> empirical_cdf(std::span<const double> values) {
    if (values.empty()) throw InsufficientDataError("empirical_cdf: empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<double, double>> cdf;
    const double n = static_cast<double>(sorted.size());
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        cdf.emplace_back(sorted[i], static_cast<double>(j) / n);
        i = j;
    }
    return cdf;
}

std::vector<std::pair<double, double>> empirical_cdf(const VolumeSeries& series) {
    return empirical_cdf(valid_values(series));
}

bool first_order_dominates(std::span<const std::pair<double, double>> cdf_a,
                           std::span<const std::pair<double, double>> cdf_b) {
    if (cdf_a.empty() || cdf_b.empty())
        throw ParameterError("first_order_dominates: empty CDF");
    auto eval = [](std::span<const std::pair<double, double>> cdf, double v) {
        // Right-continuous step function: F(v) = height of last step <= v.
        std::size_t lo = 0, hi = cdf.size();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (cdf[mid].first <= v)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo == 0 ? 0.0 : cdf[lo - 1].second;
    };
    for (const auto& [v, f] : cdf_a)
        if (f > eval(cdf_b, v) + 1e-12) return false;
    for (const auto& [v, f] : cdf_b)
        if (eval(cdf_a, v) > f + 1e-12) return false;
    return true;
}

}  // namespace lobvol
