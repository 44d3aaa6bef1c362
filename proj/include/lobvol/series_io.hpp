#pragma once

#include <iosfwd>
#include <string>

#include "lobvol/clustering.hpp"
#include "lobvol/correlo.hpp"
#include "lobvol/distfit.hpp"
#include "lobvol/excess.hpp"
#include "lobvol/series.hpp"
#include "lobvol/streaks.hpp"

namespace lobvol {

// Shortest text rendering that round-trips the double exactly.
std::string format_double(double v);

// Series files carry one metadata line before the CSV header:
//   # lobvol-series kind=<volume|returns> side=<ask|bid> interval=<s> ...
// then rows slot_index,timestamp,value,valid,segment.
void write_volume_series(std::ostream& out, const VolumeSeries& series);
VolumeSeries read_volume_series(std::istream& in);

void write_return_series(std::ostream& out, const ReturnSeries& returns);
ReturnSeries read_return_series(std::istream& in);

// Analysis outputs (plot-ready CSVs).
void write_correlation(std::ostream& out, const CorrelationEstimate& estimate);
void write_cluster_prob(std::ostream& out, const ClusterProbEstimate& estimate);
void write_streak_records(std::ostream& out, std::span<const StreakRecord> records);
void write_streak_distribution(std::ostream& out, const DurationDistribution& dist);
void write_streak_fit(std::ostream& out, const StreakFit& fit);
void write_excess_series(std::ostream& out, const ExcessSeries& series);
void write_excess_distribution(std::ostream& out, const ExcessDistribution& dist);
void write_ad_battery(std::ostream& out, std::span<const AdTestResult> results);
void write_power_law(std::ostream& out, const PowerLawFit& fit);
void write_stats(std::ostream& out, Side side, const DescriptiveStats& stats);
void write_cdf(std::ostream& out,
               std::span<const std::pair<double, double>> cdf);
// Lag-1 scatter pairs (r(t), r(t+1)) for valid same-segment neighbors.
void write_lag_scatter(std::ostream& out, const ReturnSeries& returns);

}  // namespace lobvol
