#include "lobvol/series_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "lobvol/errors.hpp"

namespace lobvol {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    // %.17g always round-trips; prefer the shorter %.15g / %.16g when exact.
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = std::strtod(buf, nullptr);
        if (back == v) return buf;
    }
    return buf;
}

namespace {

std::map<std::string, std::string> parse_meta(const std::string& line, std::size_t lineno) {
    std::map<std::string, std::string> meta;
    if (line.rfind("# lobvol-series", 0) != 0)
        throw ParseError("missing '# lobvol-series' metadata line", lineno);
    std::istringstream ss(line.substr(15));
    std::string token;
    while (ss >> token) {
        auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        meta[token.substr(0, eq)] = token.substr(eq + 1);
    }
    return meta;
}

std::int64_t meta_int(const std::map<std::string, std::string>& meta, const std::string& key,
                      std::int64_t fallback) {
    auto it = meta.find(key);
    if (it == meta.end()) return fallback;
    return std::strtoll(it->second.c_str(), nullptr, 10);
}

struct SeriesRows {
    std::vector<double> values;
    std::vector<std::uint8_t> valid;
    std::vector<std::int32_t> segment;
};

SeriesRows read_rows(std::istream& in, std::size_t& lineno) {
    SeriesRows rows;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("missing CSV header", lineno);
    ++lineno;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        // slot_index,timestamp,value,valid,segment
        double value = 0.0;
        long long slot, ts, valid, segment;
        if (std::sscanf(line.c_str(), "%lld,%lld,%lf,%lld,%lld", &slot, &ts, &value, &valid,
                        &segment) != 5) {
            // An invalid slot may carry an empty value field.
            if (std::sscanf(line.c_str(), "%lld,%lld,,%lld,%lld", &slot, &ts, &valid,
                            &segment) != 4)
                throw ParseError("bad series row", lineno);
            value = std::nan("");
        }
        rows.values.push_back(value);
        rows.valid.push_back(valid ? 1 : 0);
        rows.segment.push_back(static_cast<std::int32_t>(segment));
    }
    return rows;
}

void write_rows(std::ostream& out, const std::vector<double>& values,
                const std::vector<std::uint8_t>& valid,
                const std::vector<std::int32_t>& segment, std::int64_t start,
                std::int64_t interval, std::int64_t slot_offset) {
    out << "slot_index,timestamp,value,valid,segment\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::int64_t ts = start + (static_cast<std::int64_t>(i) + slot_offset) * interval;
        out << i << ',' << ts << ',';
        if (valid[i]) out << format_double(values[i]);
        out << ',' << (valid[i] ? 1 : 0) << ',' << segment[i] << '\n';
    }
}

}  // namespace

void write_volume_series(std::ostream& out, const VolumeSeries& series) {
    out << "# lobvol-series kind=volume side=" << side_name(series.side)
        << " interval=" << series.interval << " start=" << series.start_timestamp << '\n';
    write_rows(out, series.values, series.valid, series.segment, series.start_timestamp,
               series.interval, 0);
}

VolumeSeries read_volume_series(std::istream& in) {
    std::size_t lineno = 1;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty series file", lineno);
    auto meta = parse_meta(line, lineno);
    if (meta["kind"] != "volume") throw ParseError("expected kind=volume", lineno);

    VolumeSeries series;
    series.side = meta["side"] == "bid" ? Side::bid : Side::ask;
    series.interval = meta_int(meta, "interval", 10);
    series.start_timestamp = meta_int(meta, "start", 0);
    SeriesRows rows = read_rows(in, lineno);
    series.values = std::move(rows.values);
    series.valid = std::move(rows.valid);
    series.segment = std::move(rows.segment);
    for (std::size_t i = 0; i < series.values.size(); ++i)
        if (!series.valid[i]) {
            series.values[i] = 0.0;
            series.segment[i] = -1;
        }
    return series;
}

void write_return_series(std::ostream& out, const ReturnSeries& returns) {
    out << "# lobvol-series kind=returns side=" << side_name(returns.side)
        << " interval=" << returns.interval << " start=" << returns.start_timestamp
        << " absolute=" << (returns.absolute ? 1 : 0) << '\n';
    // Return i lands on the arrival slot i+1.
    write_rows(out, returns.values, returns.valid, returns.segment, returns.start_timestamp,
               returns.interval, 1);
}

ReturnSeries read_return_series(std::istream& in) {
    std::size_t lineno = 1;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty series file", lineno);
    auto meta = parse_meta(line, lineno);
    if (meta["kind"] != "returns") throw ParseError("expected kind=returns", lineno);

    ReturnSeries returns;
    returns.side = meta["side"] == "bid" ? Side::bid : Side::ask;
    returns.interval = meta_int(meta, "interval", 10);
    returns.start_timestamp = meta_int(meta, "start", 0);
    returns.absolute = meta_int(meta, "absolute", 0) != 0;
    std::size_t header_line = lineno;
    SeriesRows rows = read_rows(in, header_line);
    returns.values = std::move(rows.values);
    returns.valid = std::move(rows.valid);
    returns.segment = std::move(rows.segment);
    for (std::size_t i = 0; i < returns.values.size(); ++i)
        if (!returns.valid[i]) {
            returns.values[i] = 0.0;
            returns.segment[i] = -1;
        }
    return returns;
}

void write_correlation(std::ostream& out, const CorrelationEstimate& estimate) {
    out << "lag,value,noise_low,noise_high,ci_low,ci_high\n";
    for (std::size_t i = 0; i < estimate.values.size(); ++i) {
        out << (i + 1) << ',' << format_double(estimate.values[i]) << ','
            << format_double(estimate.noise_low[i]) << ','
            << format_double(estimate.noise_high[i]) << ',';
        if (estimate.has_ci())
            out << format_double(estimate.ci_low[i]) << ',' << format_double(estimate.ci_high[i]);
        else
            out << ',';
        out << '\n';
    }
}

void write_cluster_prob(std::ostream& out, const ClusterProbEstimate& estimate) {
    out << "tau,p,baseline,band_low,band_high,n_pairs\n";
    for (std::size_t i = 0; i < estimate.p.size(); ++i) {
        out << (i + 1) << ',' << format_double(estimate.p[i]) << ','
            << format_double(estimate.baseline) << ',' << format_double(estimate.band_low[i])
            << ',' << format_double(estimate.band_high[i]) << ',' << estimate.n[i] << '\n';
    }
}

void write_streak_records(std::ostream& out, std::span<const StreakRecord> records) {
    out << "start_slot,duration,volume\n";
    for (const auto& r : records)
        out << r.start_slot << ',' << r.duration << ',' << r.volume.str() << '\n';
}

void write_streak_distribution(std::ostream& out, const DurationDistribution& dist) {
    out << "duration,count,cdf\n";
    for (std::size_t i = 0; i < dist.durations.size(); ++i)
        out << dist.durations[i] << ',' << dist.counts[i] << ',' << format_double(dist.cdf[i])
            << '\n';
}

void write_streak_fit(std::ostream& out, const StreakFit& fit) {
    out << "tau,topk_mean,n\n";
    for (const auto& b : fit.buckets)
        out << b.tau << ',' << format_double(b.topk_mean) << ',' << b.n_used << '\n';
    out << "# fit amplitude=" << format_double(fit.amplitude)
        << " rate=" << format_double(fit.rate) << " r2=" << format_double(fit.r2)
        << " top_k=" << fit.top_k << " d_max=" << fit.d_max << '\n';
}

void write_excess_series(std::ostream& out, const ExcessSeries& series) {
    out << "slot,v_ex,valid\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << i << ',';
        if (series.valid[i]) out << format_double(series.values[i]);
        out << ',' << (series.valid[i] ? 1 : 0) << '\n';
    }
}

void write_excess_distribution(std::ostream& out, const ExcessDistribution& dist) {
    out << "bin_left,bin_right,count,frequency\n";
    for (std::size_t i = 0; i < dist.counts.size(); ++i) {
        out << format_double(dist.bin_left(i)) << ','
            << format_double(dist.bin_left(i) + dist.bin_width) << ',' << dist.counts[i] << ','
            << format_double(dist.frequency(i)) << '\n';
    }
    for (const auto& [x, mass] : dist.tail_mass)
        out << "# tail |v|>=" << format_double(x) << " " << format_double(mass) << '\n';
    for (const auto& [c, mass] : dist.jump_mass)
        out << "# jump v=" << format_double(c) << " " << format_double(mass) << '\n';
}

void write_ad_battery(std::ostream& out, std::span<const AdTestResult> results) {
    out << "scale,n,a2,crit,reject\n";
    for (const auto& r : results)
        out << r.scale << ',' << r.n << ',' << format_double(r.a_squared) << ','
            << format_double(r.critical) << ',' << (r.reject ? 1 : 0) << '\n';
}

void write_power_law(std::ostream& out, const PowerLawFit& fit) {
    out << "segment,lag_lo,lag_hi,k,beta,stderr,r2\n";
    for (std::size_t i = 0; i < fit.segments.size(); ++i) {
        const auto& s = fit.segments[i];
        out << i << ',' << s.lag_lo << ',' << s.lag_hi << ',' << format_double(s.amplitude)
            << ',' << format_double(s.beta) << ',' << format_double(s.stderr_beta) << ','
            << format_double(s.r2) << '\n';
    }
}

void write_stats(std::ostream& out, Side side, const DescriptiveStats& stats) {
    out << "side,n,median,iqr,mean,std_dev,skewness,kurtosis\n";
    out << side_name(side) << ',' << stats.n << ',' << format_double(stats.median) << ','
        << format_double(stats.iqr) << ',' << format_double(stats.mean) << ','
        << format_double(stats.std_dev) << ',' << format_double(stats.skewness) << ','
        << format_double(stats.kurtosis) << '\n';
}

void write_cdf(std::ostream& out, std::span<const std::pair<double, double>> cdf) {
    out << "v,F\n";
    for (const auto& [v, f] : cdf) out << format_double(v) << ',' << format_double(f) << '\n';
}

void write_lag_scatter(std::ostream& out, const ReturnSeries& returns) {
    out << "r_t,r_next\n";
    for (std::size_t i = 0; i + 1 < returns.size(); ++i) {
        if (!returns.valid[i] || !returns.valid[i + 1] ||
            returns.segment[i] != returns.segment[i + 1])
            continue;
        out << format_double(returns.values[i]) << ',' << format_double(returns.values[i + 1])
            << '\n';
    }
}

}  // namespace lobvol
