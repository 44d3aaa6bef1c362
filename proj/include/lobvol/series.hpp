#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lobvol/decimal.hpp"
#include "lobvol/ingest.hpp"

namespace lobvol {

// Best-quote state per sampling slot, with the exact printed decimals kept so
// streak detection can compare quotes without floating-point fuzz.
struct QuoteSlot {
    Decimal price;
    Decimal volume;
    bool valid = false;
};

struct BestQuoteSeries {
    Side side = Side::ask;
    std::int64_t interval = 10;         // seconds per slot
    std::int64_t start_timestamp = 0;   // timestamp of slot 0
    std::vector<QuoteSlot> slots;
    std::vector<std::int32_t> segment;  // per slot; -1 where invalid

    std::int64_t timestamp_at(std::size_t slot) const {
        return start_timestamp + static_cast<std::int64_t>(slot) * interval;
    }
};

// Volume magnitudes on a regular grid. Values are unsigned magnitudes; the
// side flag carries the asks-positive / bids-negative convention.
struct VolumeSeries {
    Side side = Side::ask;
    std::int64_t interval = 10;
    std::int64_t start_timestamp = 0;
    std::vector<double> values;
    std::vector<std::uint8_t> valid;
    std::vector<std::int32_t> segment;  // -1 where invalid

    std::size_t size() const { return values.size(); }
    std::size_t valid_count() const;
    std::int64_t timestamp_at(std::size_t slot) const {
        return start_timestamp + static_cast<std::int64_t>(slot) * interval;
    }
};

// Log volume returns. Entry i is the change from slot i to slot i+1 of the
// source series; valid only when both endpoints are valid and share a segment.
struct ReturnSeries {
    Side side = Side::ask;
    std::int64_t interval = 10;
    std::int64_t start_timestamp = 0;  // timestamp of source slot 0
    bool absolute = false;
    std::vector<double> values;
    std::vector<std::uint8_t> valid;
    std::vector<std::int32_t> segment;  // -1 where invalid

    std::size_t size() const { return values.size(); }
    std::size_t valid_count() const;
};

// One entry per nominal slot between the first and last record; slots with no
// snapshot are invalid. Records keep the exact decimals of the best quote.
BestQuoteSeries best_quote_series(const SnapshotStream& stream, Side side);

VolumeSeries to_volume_series(const BestQuoteSeries& quotes);
VolumeSeries best_volume_series(const SnapshotStream& stream, Side side);

// Closing-value resample: each target slot takes the last valid observation
// in its window. target_interval must be a positive multiple of the source
// interval; the identity resample returns the input unchanged.
VolumeSeries resample(const VolumeSeries& series, std::int64_t target_interval);

// r(i) = ln V(i+1) - ln V(i), computed as a difference of logs so a value
// round trip (up then down) cancels exactly.
ReturnSeries log_returns(const VolumeSeries& series);

ReturnSeries absolute_returns(const ReturnSeries& returns);

struct DescriptiveStats {
    std::size_t n = 0;
    double median = 0.0;
    double iqr = 0.0;  // nearest-rank Q75 - Q25
    double mean = 0.0;
    double std_dev = 0.0;   // sample (n-1) standard deviation
    double skewness = 0.0;  // standardized third central moment
    double kurtosis = 0.0;  // standardized fourth central moment, non-excess
};

DescriptiveStats descriptive_stats(std::span<const double> values);
DescriptiveStats descriptive_stats(const VolumeSeries& series);

// Right-continuous ECDF on sorted unique values: (v, P(X <= v)).
std::vector<std::pair<double, double>> empirical_cdf(std::span<const double> values);
std::vector<std::pair<double, double>> empirical_cdf(const VolumeSeries& series);

// First-order stochastic dominance: F_a(v) <= F_b(v) at every point of the
// union of supports (a's mass sits at larger values).
bool first_order_dominates(std::span<const std::pair<double, double>> cdf_a,
                           std::span<const std::pair<double, double>> cdf_b);

// Valid values in slot order (helper shared by the stat routines).
std::vector<double> valid_values(const VolumeSeries& series);
std::vector<double> valid_values(const ReturnSeries& returns);

}  // namespace lobvol
