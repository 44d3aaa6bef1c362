#include "lobvol/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lobvol/errors.hpp"

namespace lobvol {

namespace {

std::vector<std::string_view> split_fields(std::string_view line, char delim,
                                           std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

bool parse_int64(std::string_view s, std::int64_t& v) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc{} && p == s.data() + s.size();
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

// Builds segments over validated records.
std::vector<Segment> build_segments(const std::vector<SnapshotRecord>& records,
                                    std::int64_t max_gap) {
    std::vector<Segment> segments;
    if (records.empty()) return segments;
    Segment cur{0, 0};
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].timestamp - records[i - 1].timestamp > max_gap) {
            cur.last = i - 1;
            segments.push_back(cur);
            cur.first = i;
        }
    }
    cur.last = records.size() - 1;
    segments.push_back(cur);
    return segments;
}

class RecordSink {
public:
    RecordSink(const FormatConfig& config, ParseReport* report)
        : config_(config), report_(report) {}

    // Validates and either appends, quarantines, or throws.
    void push(SnapshotRecord&& record, std::size_t line) {
        RecordCheck check = check_record(record);
        if (check.ok && !records_.empty() && record.timestamp <= records_.back().timestamp) {
            check.ok = false;
            check.issue = RowIssue::out_of_order;
            check.detail = "timestamp " + std::to_string(record.timestamp) +
                           " not after " + std::to_string(records_.back().timestamp);
        }
        if (check.ok) {
            records_.push_back(std::move(record));
            if (report_) ++report_->records_ok;
            return;
        }
        reject(line, record.timestamp, check.issue, check.detail);
    }

    void reject(std::size_t line, std::int64_t timestamp, RowIssue issue,
                const std::string& detail) {
        if (config_.strict) {
            std::string what = std::string(row_issue_name(issue)) +
                               (detail.empty() ? "" : ": " + detail);
            if (issue == RowIssue::bad_format || issue == RowIssue::bad_timestamp)
                throw ParseError(what, line);
            std::string msg = "line " + std::to_string(line) + ": " + what;
            if (issue == RowIssue::out_of_order) throw OrderingError(msg);
            throw ValidationError(msg);
        }
        if (report_) report_->quarantined.push_back({line, timestamp, issue, detail});
    }

    std::vector<SnapshotRecord> take() { return std::move(records_); }

private:
    const FormatConfig& config_;
    ParseReport* report_;
    std::vector<SnapshotRecord> records_;
};

void parse_long_rows(std::istream& input, const FormatConfig& config, RecordSink& sink,
                     ParseReport* report) {
    std::string line;
    std::vector<std::string_view> fields;
    std::size_t lineno = 0;

    bool have_pending = false;
    SnapshotRecord pending;
    std::size_t pending_line = 0;
    bool pending_poisoned = false;

    auto flush = [&]() {
        if (!have_pending) return;
        if (!pending_poisoned) sink.push(std::move(pending), pending_line);
        pending = SnapshotRecord{};
        have_pending = false;
        pending_poisoned = false;
    };

    if (config.has_header && std::getline(input, line)) {
        ++lineno;
        if (report) ++report->lines_read;
    }

    while (std::getline(input, line)) {
        ++lineno;
        if (report) ++report->lines_read;
        strip_cr(line);
        if (line.empty()) continue;
        split_fields(line, config.delimiter, fields);
        if (fields.size() != 5) {
            sink.reject(lineno, 0, RowIssue::bad_format,
                        "expected 5 fields, got " + std::to_string(fields.size()));
            continue;
        }
        std::int64_t ts;
        if (!parse_int64(fields[0], ts)) {
            sink.reject(lineno, 0, RowIssue::bad_timestamp,
                        "bad timestamp '" + std::string(fields[0]) + "'");
            continue;
        }
        bool is_ask;
        if (fields[1] == "ask") {
            is_ask = true;
        } else if (fields[1] == "bid") {
            is_ask = false;
        } else {
            sink.reject(lineno, ts, RowIssue::bad_format,
                        "side must be ask or bid, got '" + std::string(fields[1]) + "'");
            continue;
        }
        std::int64_t level;
        if (!parse_int64(fields[2], level) || level < 1 || level > config.levels) {
            sink.reject(lineno, ts, RowIssue::bad_format,
                        "level out of range 1.." + std::to_string(config.levels));
            continue;
        }
        auto price = Decimal::try_parse(fields[3]);
        auto volume = Decimal::try_parse(fields[4]);
        if (!price || !volume) {
            sink.reject(lineno, ts, RowIssue::bad_format, "unparseable price or volume");
            continue;
        }

        if (have_pending && ts != pending.timestamp) flush();
        if (!have_pending) {
            have_pending = true;
            pending.timestamp = ts;
            pending_line = lineno;
        }
        if (pending_poisoned) continue;  // rest of a quarantined snapshot
        auto& side_levels = is_ask ? pending.asks : pending.bids;
        // Levels must arrive in order within a snapshot; a repeat poisons the
        // whole record rather than the single row.
        if (static_cast<std::int64_t>(side_levels.size()) + 1 != level) {
            sink.reject(pending_line, ts, RowIssue::duplicate_level,
                        std::string(side_name(is_ask ? Side::ask : Side::bid)) + " level " +
                            std::to_string(level) + " out of sequence");
            pending_poisoned = true;
            continue;
        }
        side_levels.push_back(BookLevel{*price, *volume});
    }
    flush();
}

void parse_wide_rows(std::istream& input, const FormatConfig& config, RecordSink& sink,
                     ParseReport* report) {
    std::string line;
    std::vector<std::string_view> fields;
    std::size_t lineno = 0;
    const std::size_t expect = 1 + 4 * static_cast<std::size_t>(config.levels);

    if (config.has_header && std::getline(input, line)) {
        ++lineno;
        if (report) ++report->lines_read;
    }

    while (std::getline(input, line)) {
        ++lineno;
        if (report) ++report->lines_read;
        strip_cr(line);
        if (line.empty()) continue;
        split_fields(line, config.delimiter, fields);
        if (fields.size() != expect) {
            sink.reject(lineno, 0, RowIssue::bad_format,
                        "expected " + std::to_string(expect) + " fields, got " +
                            std::to_string(fields.size()));
            continue;
        }
        std::int64_t ts;
        if (!parse_int64(fields[0], ts)) {
            sink.reject(lineno, 0, RowIssue::bad_timestamp,
                        "bad timestamp '" + std::string(fields[0]) + "'");
            continue;
        }
        SnapshotRecord record;
        record.timestamp = ts;
        bool ok = true;
        for (int side = 0; side < 2 && ok; ++side) {
            auto& levels = side == 0 ? record.asks : record.bids;
            for (int l = 0; l < config.levels; ++l) {
                std::size_t base = 1 + static_cast<std::size_t>(side) * 2 *
                                           static_cast<std::size_t>(config.levels) +
                                   static_cast<std::size_t>(l) * 2;
                std::string_view pf = fields[base];
                std::string_view vf = fields[base + 1];
                if (pf.empty() && vf.empty()) continue;  // absent level
                auto price = Decimal::try_parse(pf);
                auto volume = Decimal::try_parse(vf);
                if (!price || !volume) {
                    sink.reject(lineno, ts, RowIssue::bad_format,
                                "unparseable price or volume at level " + std::to_string(l + 1));
                    ok = false;
                    break;
                }
                levels.push_back(BookLevel{*price, *volume});
            }
        }
        if (ok) sink.push(std::move(record), lineno);
    }
}

}  // namespace

const char* row_issue_name(RowIssue issue) {
    switch (issue) {
        case RowIssue::bad_format: return "bad_format";
        case RowIssue::bad_timestamp: return "bad_timestamp";
        case RowIssue::out_of_order: return "out_of_order";
        case RowIssue::nonpositive_price: return "nonpositive_price";
        case RowIssue::nonpositive_volume: return "nonpositive_volume";
        case RowIssue::price_order: return "price_order";
        case RowIssue::crossed_book: return "crossed_book";
        case RowIssue::empty_book: return "empty_book";
        case RowIssue::duplicate_level: return "duplicate_level";
    }
    return "unknown";
}

RecordCheck check_record(const SnapshotRecord& record) {
    auto fail = [](RowIssue issue, std::string detail) {
        return RecordCheck{false, issue, std::move(detail)};
    };
    if (record.asks.empty() || record.bids.empty())
        return fail(RowIssue::empty_book, "record with an empty side");
    for (const auto* side : {&record.asks, &record.bids}) {
        for (const auto& level : *side) {
            if (!level.price.is_positive())
                return fail(RowIssue::nonpositive_price, "price " + level.price.str());
            if (!level.volume.is_positive())
                return fail(RowIssue::nonpositive_volume, "volume " + level.volume.str());
        }
    }
    for (std::size_t i = 1; i < record.asks.size(); ++i) {
        if (!(record.asks[i - 1].price < record.asks[i].price))
            return fail(RowIssue::price_order, "ask prices not strictly increasing at level " +
                                                   std::to_string(i + 1));
    }
    for (std::size_t i = 1; i < record.bids.size(); ++i) {
        if (!(record.bids[i - 1].price > record.bids[i].price))
            return fail(RowIssue::price_order, "bid prices not strictly decreasing at level " +
                                                   std::to_string(i + 1));
    }
    if (!(record.best_bid().price < record.best_ask().price))
        return fail(RowIssue::crossed_book, "best bid " + record.best_bid().price.str() +
                                                " >= best ask " + record.best_ask().price.str());
    return RecordCheck{};
}

SnapshotStream parse_snapshots(std::istream& input, const FormatConfig& config,
                               std::int64_t max_gap, ParseReport* report) {
    if (max_gap < config.nominal_interval)
        throw ParameterError("max_gap below the nominal sampling interval");

    RecordSink sink(config, report);
    if (config.layout == FormatConfig::Layout::long_rows)
        parse_long_rows(input, config, sink, report);
    else
        parse_wide_rows(input, config, sink, report);

    SnapshotStream stream;
    stream.records = sink.take();
    stream.nominal_interval = config.nominal_interval;
    stream.max_gap = max_gap;
    stream.segments = build_segments(stream.records, max_gap);
    return stream;
}

SnapshotStream parse_snapshots_file(const std::string& path, const FormatConfig& config,
                                    std::int64_t max_gap, ParseReport* report) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open input file: " + path);
    return parse_snapshots(in, config, max_gap, report);
}

void write_snapshots(std::ostream& out, const SnapshotStream& stream) {
    out << "timestamp,side,level,price,volume\n";
    for (const auto& record : stream.records) {
        for (std::size_t i = 0; i < record.asks.size(); ++i)
            out << record.timestamp << ",ask," << (i + 1) << ',' << record.asks[i].price.str()
                << ',' << record.asks[i].volume.str() << '\n';
        for (std::size_t i = 0; i < record.bids.size(); ++i)
            out << record.timestamp << ",bid," << (i + 1) << ',' << record.bids[i].price.str()
                << ',' << record.bids[i].volume.str() << '\n';
    }
}

SnapshotStream segment_stream(const SnapshotStream& stream, std::int64_t max_gap) {
    if (max_gap < stream.nominal_interval)
        throw ParameterError("max_gap below the nominal sampling interval");
    SnapshotStream out = stream;
    out.max_gap = max_gap;
    out.segments = build_segments(out.records, max_gap);
    return out;
}

}  // namespace lobvol
