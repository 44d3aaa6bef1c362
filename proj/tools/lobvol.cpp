// lobvol — volume-at-the-spread analysis toolkit.
//
// Ingests limit-order-book snapshot CSVs, builds best-quote volume series and
// derives the volume-dynamics statistics: descriptive stats, CDFs, ACF/PACF
// with noise bands and bootstrap CIs, clustering probabilities, constant
// volume streaks, excess-volume imbalance, normality batteries across time
// scales and piecewise power-law fits. Synthetic generators provide seeded,
// reproducible inputs for calibration and testing.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "lobvol/clustering.hpp"
#include "lobvol/correlo.hpp"
#include "lobvol/distfit.hpp"
#include "lobvol/errors.hpp"
#include "lobvol/excess.hpp"
#include "lobvol/ingest.hpp"
#include "lobvol/mathx.hpp"
#include "lobvol/report.hpp"
#include "lobvol/series.hpp"
#include "lobvol/series_io.hpp"
#include "lobvol/streaks.hpp"
#include "lobvol/synth.hpp"

namespace {

using namespace lobvol;

struct InputOptions {
    std::string snapshot_path;  // --input: snapshot CSV
    std::string series_path;    // --series: lobvol series CSV
    std::string side = "ask";
    std::int64_t scale = 0;  // 0 = native
    std::int64_t max_gap = 30;
    std::string layout = "long";
    std::int64_t nominal_interval = 10;

    void attach(CLI::App* cmd, bool with_side = true) {
        cmd->add_option("--input", snapshot_path, "snapshot CSV path");
        cmd->add_option("--series", series_path, "series CSV path (lobvol series format)");
        if (with_side) cmd->add_option("--side", side, "ask or bid")->check(CLI::IsMember({"ask", "bid"}));
        cmd->add_option("--scale", scale, "target time scale in seconds (0 = native)");
        cmd->add_option("--max-gap", max_gap, "segmentation gap tolerance in seconds");
        cmd->add_option("--layout", layout, "snapshot layout: long or wide")
            ->check(CLI::IsMember({"long", "wide"}));
        cmd->add_option("--interval", nominal_interval, "nominal sampling interval in seconds");
    }

    Side side_enum() const { return side == "bid" ? Side::bid : Side::ask; }

    FormatConfig format() const {
        FormatConfig f;
        f.layout = layout == "wide" ? FormatConfig::Layout::wide_rows
                                    : FormatConfig::Layout::long_rows;
        f.nominal_interval = nominal_interval;
        return f;
    }

    VolumeSeries load_volume() const {
        VolumeSeries v;
        if (!series_path.empty()) {
            std::ifstream in(series_path);
            if (!in) throw ParameterError("cannot open series file: " + series_path);
            v = read_volume_series(in);
        } else if (!snapshot_path.empty()) {
            SnapshotStream stream =
                parse_snapshots_file(snapshot_path, format(), max_gap, nullptr);
            v = best_volume_series(stream, side_enum());
        } else {
            throw ParameterError("need --input or --series");
        }
        if (scale > 0) v = resample(v, scale);
        return v;
    }

    ReturnSeries load_returns(bool absolute) const {
        ReturnSeries r;
        if (!series_path.empty()) {
            std::ifstream in(series_path);
            if (!in) throw ParameterError("cannot open series file: " + series_path);
            std::string first;
            std::getline(in, first);
            in.seekg(0);
            if (first.find("kind=returns") != std::string::npos) {
                r = read_return_series(in);
                if (scale > 0 && scale != r.interval)
                    throw ParameterError("--scale cannot resample an existing return series");
            } else {
                VolumeSeries v = read_volume_series(in);
                if (scale > 0) v = resample(v, scale);
                r = log_returns(v);
            }
        } else {
            r = log_returns(load_volume());
        }
        if (absolute && !r.absolute) r = absolute_returns(r);
        return r;
    }
};

// Writes to the path or stdout when empty.
void emit(const std::string& path, const std::function<void(std::ostream&)>& writer) {
    if (path.empty()) {
        writer(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot open output file: " + path);
    writer(out);
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"lobvol: order-book volume dynamics toolkit"};
    app.require_subcommand(1);

    // ---- ingest
    auto* ingest = app.add_subcommand("ingest", "parse and index a snapshot file");
    InputOptions ingest_in;
    ingest_in.attach(ingest, false);
    std::string ingest_out, ingest_report;
    bool ingest_strict = false;
    ingest->add_option("--out", ingest_out, "canonical snapshot CSV output");
    ingest->add_option("--quarantine-report", ingest_report, "quarantine report file");
    ingest->add_flag("--strict", ingest_strict, "fail on the first invalid record");
    ingest->callback([&] {
        if (ingest_in.snapshot_path.empty()) throw ParameterError("ingest needs --input");
        FormatConfig f = ingest_in.format();
        f.strict = ingest_strict;
        ParseReport report;
        SnapshotStream stream =
            parse_snapshots_file(ingest_in.snapshot_path, f, ingest_in.max_gap, &report);
        emit(ingest_out, [&](std::ostream& os) { write_snapshots(os, stream); });
        if (!ingest_report.empty()) {
            std::ofstream rep(ingest_report);
            rep << "line,timestamp,issue,detail\n";
            for (const auto& q : report.quarantined)
                rep << q.line << ',' << q.timestamp << ',' << row_issue_name(q.issue) << ",\""
                    << q.detail << "\"\n";
        }
        std::cerr << "records " << stream.records.size() << ", segments "
                  << stream.segments.size() << ", quarantined " << report.quarantined.size()
                  << '\n';
    });

    // ---- series
    auto* series_cmd = app.add_subcommand("series", "best-quote volume series");
    InputOptions series_in;
    series_in.attach(series_cmd);
    std::string series_out;
    series_cmd->add_option("--out", series_out, "output CSV");
    series_cmd->callback([&] {
        VolumeSeries v = series_in.load_volume();
        emit(series_out, [&](std::ostream& os) { write_volume_series(os, v); });
    });

    // ---- returns
    auto* returns_cmd = app.add_subcommand("returns", "log volume returns");
    InputOptions returns_in;
    returns_in.attach(returns_cmd);
    std::string returns_out;
    bool returns_abs = false;
    returns_cmd->add_flag("--abs", returns_abs, "absolute returns");
    returns_cmd->add_option("--out", returns_out, "output CSV");
    returns_cmd->callback([&] {
        ReturnSeries r = returns_in.load_returns(returns_abs);
        emit(returns_out, [&](std::ostream& os) { write_return_series(os, r); });
    });

    // ---- stats
    auto* stats_cmd = app.add_subcommand("stats", "descriptive statistics of volumes");
    InputOptions stats_in;
    stats_in.attach(stats_cmd);
    std::string stats_out;
    stats_cmd->add_option("--out", stats_out, "output CSV");
    stats_cmd->callback([&] {
        VolumeSeries v = stats_in.load_volume();
        DescriptiveStats stats = descriptive_stats(v);
        emit(stats_out, [&](std::ostream& os) { write_stats(os, v.side, stats); });
    });

    // ---- cdf
    auto* cdf_cmd = app.add_subcommand("cdf", "empirical CDF of volumes");
    InputOptions cdf_in;
    cdf_in.attach(cdf_cmd);
    std::string cdf_out;
    cdf_cmd->add_option("--out", cdf_out, "output CSV");
    cdf_cmd->callback([&] {
        VolumeSeries v = cdf_in.load_volume();
        auto cdf = empirical_cdf(v);
        emit(cdf_out, [&](std::ostream& os) { write_cdf(os, cdf); });
    });

    // ---- acf / pacf
    for (const char* kind : {"acf", "pacf"}) {
        bool is_acf = std::string(kind) == "acf";
        auto* cmd = app.add_subcommand(kind, is_acf ? "autocorrelation function"
                                                    : "partial autocorrelation function");
        auto in = std::make_shared<InputOptions>();
        in->attach(cmd);
        auto abs_flag = std::make_shared<bool>(false);
        auto max_lag = std::make_shared<int>(100);
        auto out_path = std::make_shared<std::string>();
        auto level = std::make_shared<double>(0.99);
        cmd->add_flag("--abs", *abs_flag, "use absolute returns");
        cmd->add_option("--max-lag", *max_lag, "largest lag");
        cmd->add_option("--level", *level, "confidence level for bands");
        cmd->add_option("--out", *out_path, "output CSV");
        auto bootstrap = std::make_shared<int>(0);
        auto block = std::make_shared<std::string>("auto");
        auto seed = std::make_shared<std::uint64_t>(0);
        if (is_acf) {
            cmd->add_option("--bootstrap", *bootstrap, "bootstrap replicate count (0 = off)");
            cmd->add_option("--block", *block, "block length or 'auto'");
            cmd->add_option("--seed", *seed, "bootstrap seed");
        }
        cmd->callback([=] {
            ReturnSeries r = in->load_returns(*abs_flag);
            AcfOptions options;
            options.band_level = *level;
            CorrelationEstimate est = is_acf ? acf(r, *max_lag, options)
                                             : pacf(r, *max_lag, options);
            if (is_acf && *bootstrap > 0) {
                BootstrapOptions b;
                b.replicates = *bootstrap;
                b.block_len = *block == "auto" ? 0 : static_cast<int>(std::stoll(*block));
                b.level = *level;
                b.seed = *seed;
                block_bootstrap_ci(r, est, b);
            }
            emit(*out_path, [&](std::ostream& os) { write_correlation(os, est); });
        });
    }

    // ---- cluster-prob
    auto* cluster_cmd = app.add_subcommand("cluster-prob", "conditional exceedance probability");
    InputOptions cluster_in;
    cluster_in.attach(cluster_cmd);
    double cluster_q = 99.0;
    int cluster_tau = 200;
    std::string cluster_out;
    cluster_cmd->add_option("--q", cluster_q, "threshold percentile");
    cluster_cmd->add_option("--max-tau", cluster_tau, "largest step separation");
    cluster_cmd->add_option("--out", cluster_out, "output CSV");
    cluster_cmd->callback([&] {
        ReturnSeries abs_r = cluster_in.load_returns(true);
        ClusterProbEstimate est = cluster_prob(abs_r, cluster_q, cluster_tau);
        if (est.low_sample)
            std::cerr << "warning: only " << est.exceedances
                      << " exceedances at q=" << cluster_q << "; estimates are noisy\n";
        emit(cluster_out, [&](std::ostream& os) { write_cluster_prob(os, est); });
    });

    // ---- streaks
    auto* streaks_cmd = app.add_subcommand("streaks", "constant-volume streaks");
    InputOptions streaks_in;
    streaks_in.attach(streaks_cmd);
    int streak_k = 10;
    std::int64_t streak_dmax = 45;
    std::string streaks_out, streak_dist_out, streak_fit_out;
    streaks_cmd->add_option("--top-k", streak_k, "extreme volumes per duration");
    streaks_cmd->add_option("--d-max", streak_dmax, "duration cutoff for the fit");
    streaks_cmd->add_option("--out", streaks_out, "streak records CSV");
    streaks_cmd->add_option("--out-dist", streak_dist_out, "duration distribution CSV");
    streaks_cmd->add_option("--out-fit", streak_fit_out, "extreme-volume fit CSV");
    streaks_cmd->callback([&] {
        if (streaks_in.snapshot_path.empty())
            throw ParameterError("streaks needs --input (exact quote decimals)");
        SnapshotStream stream = parse_snapshots_file(streaks_in.snapshot_path,
                                                     streaks_in.format(), streaks_in.max_gap);
        BestQuoteSeries quotes = best_quote_series(stream, streaks_in.side_enum());
        auto records = detect_streaks(quotes);
        emit(streaks_out, [&](std::ostream& os) { write_streak_records(os, records); });
        if (!streak_dist_out.empty()) {
            auto dist = streak_duration_distribution(records);
            emit(streak_dist_out,
                 [&](std::ostream& os) { write_streak_distribution(os, dist); });
        }
        if (!streak_fit_out.empty()) {
            StreakFit fit = fit_extreme_volume_decay(records, streak_k, streak_dmax);
            emit(streak_fit_out, [&](std::ostream& os) { write_streak_fit(os, fit); });
        }
    });

    // ---- excess
    auto* excess_cmd = app.add_subcommand("excess", "excess-volume imbalance");
    InputOptions excess_in;
    excess_in.attach(excess_cmd, false);
    double excess_bin = 0.01;
    std::string excess_tails = "0.75";
    std::string excess_out, excess_hist_out;
    excess_cmd->add_option("--bin", excess_bin, "histogram bin width");
    excess_cmd->add_option("--tails", excess_tails, "tail thresholds, comma separated");
    excess_cmd->add_option("--out", excess_out, "series CSV");
    excess_cmd->add_option("--out-hist", excess_hist_out, "histogram CSV");
    excess_cmd->callback([&] {
        if (excess_in.snapshot_path.empty()) throw ParameterError("excess needs --input");
        SnapshotStream stream = parse_snapshots_file(excess_in.snapshot_path,
                                                     excess_in.format(), excess_in.max_gap);
        VolumeSeries ask = best_volume_series(stream, Side::ask);
        VolumeSeries bid = best_volume_series(stream, Side::bid);
        if (excess_in.scale > 0) {
            ask = resample(ask, excess_in.scale);
            bid = resample(bid, excess_in.scale);
        }
        ExcessSeries ex = excess_volume(ask, bid);
        emit(excess_out, [&](std::ostream& os) { write_excess_series(os, ex); });
        if (!excess_hist_out.empty()) {
            auto tails = parse_double_list(excess_tails);
            ExcessDistribution dist = excess_distribution(ex, excess_bin, tails);
            emit(excess_hist_out,
                 [&](std::ostream& os) { write_excess_distribution(os, dist); });
        }
    });

    // ---- gaussianity
    auto* gauss_cmd = app.add_subcommand("gaussianity", "Anderson-Darling battery across scales");
    InputOptions gauss_in;
    gauss_in.attach(gauss_cmd);
    std::string gauss_scales = "10,60,180,300,3600,28800";
    std::string gauss_out;
    gauss_cmd->add_option("--scales", gauss_scales, "comma-separated scales in seconds");
    gauss_cmd->add_option("--out", gauss_out, "output CSV");
    gauss_cmd->callback([&] {
        VolumeSeries native = gauss_in.load_volume();
        std::vector<ReturnSeries> battery;
        for (std::int64_t scale : parse_int_list(gauss_scales))
            battery.push_back(log_returns(resample(native, scale)));
        auto results = ad_normality_battery(battery);
        emit(gauss_out, [&](std::ostream& os) { write_ad_battery(os, results); });
    });

    // ---- powerlaw
    auto* pl_cmd = app.add_subcommand("powerlaw", "piecewise power-law fit of the absolute ACF");
    InputOptions pl_in;
    pl_in.attach(pl_cmd);
    std::string pl_breaks = "60,720";
    std::string pl_out;
    int pl_lag_min = 1, pl_lag_max = 1000;
    bool pl_scan = false;
    int pl_max_breaks = 2;
    pl_cmd->add_option("--breaks", pl_breaks, "breakpoints (or scan candidates with --scan)");
    pl_cmd->add_option("--lag-min", pl_lag_min, "first lag of the fit domain");
    pl_cmd->add_option("--lag-max", pl_lag_max, "last lag of the fit domain");
    pl_cmd->add_flag("--scan", pl_scan, "select breakpoints from the candidate set");
    pl_cmd->add_option("--max-breaks", pl_max_breaks, "breakpoint budget for --scan");
    pl_cmd->add_option("--out", pl_out, "output CSV");
    pl_cmd->callback([&] {
        ReturnSeries abs_r = pl_in.load_returns(true);
        CorrelationEstimate est = acf(abs_r, pl_lag_max, {});
        auto breaks = parse_int_list(pl_breaks);
        PowerLawFit fit = pl_scan
                              ? scan_breakpoints(est, breaks, pl_max_breaks, pl_lag_min,
                                                 pl_lag_max)
                              : fit_power_law(est, breaks, pl_lag_min, pl_lag_max);
        emit(pl_out, [&](std::ostream& os) { write_power_law(os, fit); });
    });

    // ---- synth
    auto* synth_cmd = app.add_subcommand("synth", "seeded synthetic series");
    std::string synth_kind = "iid_normal";
    std::string synth_theta, synth_palette = "2,8";
    double synth_phi = 0.5, synth_hurst = 0.85;
    double synth_period = 1000, synth_amplitude = 4, synth_prob = 0.1;
    std::size_t synth_n = 0;
    std::uint64_t synth_seed = 0;
    std::string synth_out;
    synth_cmd->add_option("--kind", synth_kind, "iid_normal|ma|ar1|quote_flicker|long_memory|clustered")
        ->check(CLI::IsMember({"iid_normal", "ma", "ar1", "quote_flicker", "long_memory",
                               "clustered"}));
    synth_cmd->add_option("--theta", synth_theta, "MA coefficients, comma separated");
    synth_cmd->add_option("--phi", synth_phi, "AR(1) coefficient");
    synth_cmd->add_option("--hurst", synth_hurst, "Hurst exponent");
    synth_cmd->add_option("--period", synth_period, "envelope period in slots");
    synth_cmd->add_option("--amplitude", synth_amplitude, "envelope amplitude");
    synth_cmd->add_option("--flicker-prob", synth_prob, "flicker probability");
    synth_cmd->add_option("--palette", synth_palette, "flicker volumes; first is the base");
    synth_cmd->add_option("--n", synth_n, "series length")->required();
    synth_cmd->add_option("--seed", synth_seed, "generator seed");
    synth_cmd->add_option("--out", synth_out, "output CSV");
    synth_cmd->callback([&] {
        GeneratorSpec spec;
        spec.length = synth_n;
        spec.seed = synth_seed;
        if (synth_kind == "ma") spec.kind = GeneratorSpec::Kind::ma;
        else if (synth_kind == "ar1") spec.kind = GeneratorSpec::Kind::ar1;
        else if (synth_kind == "quote_flicker") spec.kind = GeneratorSpec::Kind::quote_flicker;
        else if (synth_kind == "long_memory") spec.kind = GeneratorSpec::Kind::long_memory;
        else if (synth_kind == "clustered") spec.kind = GeneratorSpec::Kind::clustered;
        if (!synth_theta.empty()) spec.ma_theta = parse_double_list(synth_theta);
        spec.ar_phi = synth_phi;
        spec.hurst = synth_hurst;
        spec.envelope_period = synth_period;
        spec.envelope_amplitude = synth_amplitude;
        spec.flicker_prob = synth_prob;
        spec.palette = parse_double_list(synth_palette);
        GeneratedSeries gen = generate(spec);
        emit(synth_out, [&](std::ostream& os) {
            if (gen.is_volume)
                write_volume_series(os, gen.volumes);
            else
                write_return_series(os, gen.returns);
        });
    });

    // ---- report
    auto* report_cmd = app.add_subcommand("report", "full analysis bundle with manifest");
    std::string report_config, report_input, report_outdir;
    std::uint64_t report_seed = 0;
    report_cmd->add_option("--config", report_config, "flat key=value config file");
    report_cmd->add_option("--input", report_input, "override input path");
    report_cmd->add_option("--out-dir", report_outdir, "override output directory");
    auto* seed_opt = report_cmd->add_option("--seed", report_seed, "override seed");
    report_cmd->callback([&] {
        RunConfig config;
        if (!report_config.empty()) config = load_run_config_file(report_config);
        if (!report_input.empty()) config.input = report_input;
        if (!report_outdir.empty()) config.out_dir = report_outdir;
        if (seed_opt->count() > 0) config.seed = report_seed;
        ReportOutcome outcome = run_report(config);
        std::cerr << "manifest: " << outcome.manifest_path << '\n';
        for (const auto& name : outcome.failed_analyses)
            std::cerr << "failed: " << name << '\n';
        if (outcome.exit_code != 0) throw CLI::RuntimeError(outcome.exit_code);
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
