#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lobvol/decimal.hpp"

namespace lobvol {

enum class Side { ask, bid };

inline const char* side_name(Side s) { return s == Side::ask ? "ask" : "bid"; }

struct BookLevel {
    Decimal price;
    Decimal volume;
    friend bool operator==(const BookLevel&, const BookLevel&) = default;
};

// One order-book snapshot: up to 20 levels per side, asks by ascending price,
// bids by descending price, positive spread.
struct SnapshotRecord {
    std::int64_t timestamp = 0;  // seconds since epoch, UTC
    std::vector<BookLevel> asks;
    std::vector<BookLevel> bids;

    const BookLevel& best_ask() const { return asks.front(); }
    const BookLevel& best_bid() const { return bids.front(); }
    friend bool operator==(const SnapshotRecord&, const SnapshotRecord&) = default;
};

// Contiguous run of records with no timestamp gap above max_gap. Indices into
// SnapshotStream::records, inclusive.
struct Segment {
    std::size_t first = 0;
    std::size_t last = 0;
    friend bool operator==(const Segment&, const Segment&) = default;
};

struct SnapshotStream {
    std::vector<SnapshotRecord> records;  // strictly increasing timestamps
    std::int64_t nominal_interval = 10;   // seconds
    std::int64_t max_gap = 30;            // seconds, segmentation tolerance
    std::vector<Segment> segments;

    friend bool operator==(const SnapshotStream&, const SnapshotStream&) = default;
};

enum class RowIssue {
    bad_format,
    bad_timestamp,
    out_of_order,
    nonpositive_price,
    nonpositive_volume,
    price_order,
    crossed_book,
    empty_book,
    duplicate_level,
};

const char* row_issue_name(RowIssue issue);

struct QuarantineEntry {
    std::size_t line = 0;  // 1-based line in the input (first line of the record)
    std::int64_t timestamp = 0;
    RowIssue issue = RowIssue::bad_format;
    std::string detail;
};

struct ParseReport {
    std::size_t lines_read = 0;
    std::size_t records_ok = 0;
    std::vector<QuarantineEntry> quarantined;
};

struct FormatConfig {
    enum class Layout {
        long_rows,  // timestamp,side,level,price,volume ; one row per level
        wide_rows,  // timestamp,ask_price_1,ask_volume_1,...,bid_price_N,bid_volume_N
    };
    Layout layout = Layout::long_rows;
    char delimiter = ',';
    bool has_header = true;
    int levels = 20;                     // level budget per side
    std::int64_t nominal_interval = 10;  // seconds
    // strict: throw on the first malformed or invalid record instead of
    // quarantining it to the report.
    bool strict = false;
};

// Parses a snapshot file into a validated, segmented stream. Invalid records
// are quarantined into `report` (kept out of the stream) unless
// config.strict, in which case a typed error naming the line is thrown.
SnapshotStream parse_snapshots(std::istream& input, const FormatConfig& config,
                               std::int64_t max_gap = 30, ParseReport* report = nullptr);

SnapshotStream parse_snapshots_file(const std::string& path, const FormatConfig& config,
                                    std::int64_t max_gap = 30, ParseReport* report = nullptr);

// Canonical long-layout serialization; parse(write(stream)) == stream.
void write_snapshots(std::ostream& out, const SnapshotStream& stream);

// Recomputes segments with a new gap tolerance. max_gap must be at least the
// nominal interval.
SnapshotStream segment_stream(const SnapshotStream& stream, std::int64_t max_gap);

// Validates one record against the book invariants; returns the first issue
// found or nullopt-style success via the bool.
struct RecordCheck {
    bool ok = true;
    RowIssue issue = RowIssue::bad_format;
    std::string detail;
};
RecordCheck check_record(const SnapshotRecord& record);

}  // namespace lobvol
