#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lobvol/ingest.hpp"

namespace lobvol {

// Flat configuration for a full report run. Every field is validated before
// any computation starts.
struct RunConfig {
    std::string input;    // snapshot CSV path
    std::string out_dir;  // created if absent
    FormatConfig format;
    std::int64_t max_gap = 30;
    std::vector<Side> sides = {Side::ask, Side::bid};

    // analysis toggles; empty = all
    std::vector<std::string> analyses;

    std::vector<std::int64_t> scales = {10, 60, 180, 300, 3600, 28800};  // gaussianity
    int max_lag = 100;           // signed ACF/PACF
    int abs_max_lag = 1000;      // absolute-return ACF feeding the power-law fit
    std::vector<double> q_list = {90.0, 99.0};
    int max_tau = 200;
    std::vector<std::int64_t> cluster_scales = {10, 900};
    int top_k = 10;
    std::int64_t d_max = 45;
    std::vector<std::int64_t> breakpoints = {60, 720};
    int bootstrap_replicates = 0;  // 0 disables bootstrap CIs
    int bootstrap_block = 0;       // 0 = auto
    std::uint64_t seed = 0;
    unsigned max_threads = 0;

    bool analysis_enabled(const std::string& name) const;
};

// Parses `key = value` lines; '#' starts a comment. Unknown keys error.
RunConfig load_run_config(std::istream& in);
RunConfig load_run_config_file(const std::string& path);

struct ReportOutcome {
    // 0 = all analyses ok, 2 = validation failure, 3 = some analyses failed
    int exit_code = 0;
    std::string manifest_path;
    std::vector<std::string> failed_analyses;
};

// Runs every enabled analysis, writes plot-ready CSVs plus manifest.json into
// config.out_dir. Independent analyses keep running when one fails; failures
// are recorded in the manifest.
ReportOutcome run_report(const RunConfig& config);

}  // namespace lobvol
