#include "lobvol/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "lobvol/clustering.hpp"
#include "lobvol/correlo.hpp"
#include "lobvol/distfit.hpp"
#include "lobvol/errors.hpp"
#include "lobvol/excess.hpp"
#include "lobvol/mathx.hpp"
#include "lobvol/series.hpp"
#include "lobvol/series_io.hpp"
#include "lobvol/streaks.hpp"

namespace lobvol {

namespace {

const char* kAllAnalyses[] = {"stats",   "cdf",     "gaussianity", "acf",    "pacf",
                              "scatter", "powerlaw", "cluster",    "streaks", "excess"};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) {
        // trim
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

std::vector<std::int64_t> int_list(const std::string& text) {
    std::vector<std::int64_t> out;
    for (const auto& item : split_list(text)) out.push_back(std::stoll(item));
    return out;
}

std::vector<double> double_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(std::stod(item));
    return out;
}

}  // namespace

bool RunConfig::analysis_enabled(const std::string& name) const {
    if (analyses.empty()) return true;
    return std::find(analyses.begin(), analyses.end(), name) != analyses.end();
}

RunConfig load_run_config(std::istream& in) {
    RunConfig config;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw ParseError("expected key = value", lineno);
            continue;
        }
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "input") config.input = value;
            else if (key == "out_dir") config.out_dir = value;
            else if (key == "max_gap") config.max_gap = std::stoll(value);
            else if (key == "nominal_interval") config.format.nominal_interval = std::stoll(value);
            else if (key == "layout")
                config.format.layout = value == "wide" ? FormatConfig::Layout::wide_rows
                                                       : FormatConfig::Layout::long_rows;
            else if (key == "sides") {
                config.sides.clear();
                for (const auto& s : split_list(value))
                    config.sides.push_back(s == "bid" ? Side::bid : Side::ask);
            } else if (key == "analyses") config.analyses = split_list(value);
            else if (key == "scales") config.scales = int_list(value);
            else if (key == "max_lag") config.max_lag = static_cast<int>(std::stoll(value));
            else if (key == "abs_max_lag")
                config.abs_max_lag = static_cast<int>(std::stoll(value));
            else if (key == "q_list") config.q_list = double_list(value);
            else if (key == "max_tau") config.max_tau = static_cast<int>(std::stoll(value));
            else if (key == "cluster_scales") config.cluster_scales = int_list(value);
            else if (key == "top_k") config.top_k = static_cast<int>(std::stoll(value));
            else if (key == "d_max") config.d_max = std::stoll(value);
            else if (key == "breakpoints") config.breakpoints = int_list(value);
            else if (key == "bootstrap_replicates")
                config.bootstrap_replicates = static_cast<int>(std::stoll(value));
            else if (key == "bootstrap_block")
                config.bootstrap_block = static_cast<int>(std::stoll(value));
            else if (key == "seed") config.seed = std::stoull(value);
            else if (key == "max_threads")
                config.max_threads = static_cast<unsigned>(std::stoul(value));
            else
                throw ParseError("unknown config key '" + key + "'", lineno);
        } catch (const std::invalid_argument&) {
            throw ParseError("bad value for '" + key + "'", lineno);
        } catch (const std::out_of_range&) {
            throw ParseError("value out of range for '" + key + "'", lineno);
        }
    }
    return config;
}

RunConfig load_run_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config file: " + path);
    return load_run_config(in);
}

namespace {

void validate_config(const RunConfig& config) {
    if (config.input.empty()) throw ParameterError("config: input path required");
    if (!std::filesystem::exists(config.input))
        throw ParameterError("config: input file does not exist: " + config.input);
    if (config.out_dir.empty()) throw ParameterError("config: out_dir required");
    if (config.max_gap < config.format.nominal_interval)
        throw ParameterError("config: max_gap below nominal interval");
    for (const auto& name : config.analyses) {
        bool known = false;
        for (const char* a : kAllAnalyses) known = known || name == a;
        if (!known) throw ParameterError("config: unknown analysis '" + name + "'");
    }
    for (std::int64_t s : config.scales)
        if (s <= 0 || s % config.format.nominal_interval != 0)
            throw ParameterError("config: scale " + std::to_string(s) +
                                 " is not a multiple of the nominal interval");
    for (double q : config.q_list)
        if (!(q > 0.0 && q < 100.0)) throw ParameterError("config: percentile outside (0,100)");
    if (config.max_lag < 1 || config.abs_max_lag < 1 || config.max_tau < 1 ||
        config.top_k < 1 || config.d_max < 2)
        throw ParameterError("config: nonpositive analysis parameter");
}

// Serializes writes so manifest order is deterministic and file output is
// single-threaded even when analyses run concurrently.
class ManifestWriter {
public:
    explicit ManifestWriter(const std::filesystem::path& dir) : dir_(dir) {}

    void write_output(const std::string& analysis, const std::string& filename,
                      const std::string& content) {
        std::lock_guard lock(mutex_);
        std::ofstream out(dir_ / filename, std::ios::binary);
        out << content;
        out.close();
        nlohmann::ordered_json entry;
        entry["analysis"] = analysis;
        entry["file"] = filename;
        char hash[20];
        std::snprintf(hash, sizeof hash, "%016llx",
                      static_cast<unsigned long long>(fnv1a64(content)));
        entry["fnv1a64"] = hash;
        outputs_.push_back(entry);
    }

    void record_failure(const std::string& analysis, const std::string& message) {
        std::lock_guard lock(mutex_);
        nlohmann::ordered_json entry;
        entry["analysis"] = analysis;
        entry["error"] = message;
        failures_.push_back(entry);
    }

    nlohmann::ordered_json outputs() {
        std::lock_guard lock(mutex_);
        std::sort(outputs_.begin(), outputs_.end(),
                  [](const auto& a, const auto& b) { return a["file"] < b["file"]; });
        return outputs_;
    }
    nlohmann::ordered_json failures() {
        std::lock_guard lock(mutex_);
        std::sort(failures_.begin(), failures_.end(),
                  [](const auto& a, const auto& b) { return a["analysis"] < b["analysis"]; });
        return failures_;
    }
    std::vector<std::string> failed_names() {
        std::lock_guard lock(mutex_);
        std::vector<std::string> names;
        for (const auto& f : failures_) names.push_back(f["analysis"]);
        std::sort(names.begin(), names.end());
        return names;
    }

private:
    std::filesystem::path dir_;
    std::mutex mutex_;
    nlohmann::ordered_json outputs_ = nlohmann::ordered_json::array();
    nlohmann::ordered_json failures_ = nlohmann::ordered_json::array();
};

std::string render(const std::function<void(std::ostream&)>& writer) {
    std::ostringstream ss;
    writer(ss);
    return ss.str();
}

nlohmann::ordered_json config_json(const RunConfig& config) {
    nlohmann::ordered_json j;
    j["input"] = config.input;
    j["out_dir"] = config.out_dir;
    j["max_gap"] = config.max_gap;
    j["nominal_interval"] = config.format.nominal_interval;
    std::vector<std::string> sides;
    for (Side s : config.sides) sides.emplace_back(side_name(s));
    j["sides"] = sides;
    j["analyses"] = config.analyses.empty()
                        ? std::vector<std::string>(std::begin(kAllAnalyses),
                                                   std::end(kAllAnalyses))
                        : config.analyses;
    j["scales"] = config.scales;
    j["max_lag"] = config.max_lag;
    j["abs_max_lag"] = config.abs_max_lag;
    j["q_list"] = config.q_list;
    j["max_tau"] = config.max_tau;
    j["cluster_scales"] = config.cluster_scales;
    j["top_k"] = config.top_k;
    j["d_max"] = config.d_max;
    j["breakpoints"] = config.breakpoints;
    j["bootstrap_replicates"] = config.bootstrap_replicates;
    j["bootstrap_block"] = config.bootstrap_block;
    j["seed"] = config.seed;
    return j;
}

}  // namespace

ReportOutcome run_report(const RunConfig& config) {
    validate_config(config);
    std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);

    ParseReport parse_report;
    SnapshotStream stream =
        parse_snapshots_file(config.input, config.format, config.max_gap, &parse_report);

    ManifestWriter writer(dir);

    struct Task {
        std::string name;
        std::function<void()> run;
    };
    std::vector<Task> tasks;

    for (Side side : config.sides) {
        const std::string tag = side_name(side);
        BestQuoteSeries quotes = best_quote_series(stream, side);
        auto volumes = std::make_shared<VolumeSeries>(to_volume_series(quotes));
        auto quotes_ptr = std::make_shared<BestQuoteSeries>(std::move(quotes));

        if (config.analysis_enabled("stats")) {
            tasks.push_back({"stats_" + tag, [=, &writer] {
                DescriptiveStats stats = descriptive_stats(*volumes);
                writer.write_output("stats", "stats_" + tag + ".csv",
                                    render([&](std::ostream& os) {
                                        write_stats(os, side, stats);
                                    }));
            }});
        }
        if (config.analysis_enabled("cdf")) {
            tasks.push_back({"cdf_" + tag, [=, &writer] {
                auto cdf = empirical_cdf(*volumes);
                writer.write_output("cdf", "cdf_" + tag + ".csv",
                                    render([&](std::ostream& os) { write_cdf(os, cdf); }));
            }});
        }
        if (config.analysis_enabled("gaussianity")) {
            tasks.push_back({"gaussianity_" + tag, [=, &writer, &config] {
                std::vector<ReturnSeries> battery;
                for (std::int64_t scale : config.scales)
                    battery.push_back(log_returns(resample(*volumes, scale)));
                auto results = ad_normality_battery(battery);
                writer.write_output("gaussianity", "ad_battery_" + tag + ".csv",
                                    render([&](std::ostream& os) {
                                        write_ad_battery(os, results);
                                    }));
            }});
        }
        if (config.analysis_enabled("acf") || config.analysis_enabled("pacf")) {
            tasks.push_back({"acf_" + tag, [=, &writer, &config] {
                ReturnSeries returns = log_returns(*volumes);
                AcfOptions options;
                options.max_threads = config.max_threads;
                CorrelationEstimate est_acf = acf(returns, config.max_lag, options);
                if (config.bootstrap_replicates > 0) {
                    BootstrapOptions b;
                    b.replicates = config.bootstrap_replicates;
                    b.block_len = config.bootstrap_block;
                    b.seed = config.seed;
                    b.max_threads = config.max_threads;
                    block_bootstrap_ci(returns, est_acf, b);
                }
                if (config.analysis_enabled("acf"))
                    writer.write_output("acf", "acf_signed_" + tag + ".csv",
                                        render([&](std::ostream& os) {
                                            write_correlation(os, est_acf);
                                        }));
                if (config.analysis_enabled("pacf")) {
                    CorrelationEstimate est_pacf = pacf(returns, config.max_lag, options);
                    writer.write_output("pacf", "pacf_signed_" + tag + ".csv",
                                        render([&](std::ostream& os) {
                                            write_correlation(os, est_pacf);
                                        }));
                }
            }});
        }
        if (config.analysis_enabled("scatter")) {
            tasks.push_back({"scatter_" + tag, [=, &writer] {
                ReturnSeries returns = log_returns(*volumes);
                writer.write_output("scatter", "scatter_lag1_" + tag + ".csv",
                                    render([&](std::ostream& os) {
                                        write_lag_scatter(os, returns);
                                    }));
            }});
        }
        if (config.analysis_enabled("powerlaw")) {
            tasks.push_back({"powerlaw_" + tag, [=, &writer, &config] {
                ReturnSeries abs_r = absolute_returns(log_returns(*volumes));
                AcfOptions options;
                options.max_threads = config.max_threads;
                CorrelationEstimate est = acf(abs_r, config.abs_max_lag, options);
                writer.write_output("powerlaw", "acf_abs_" + tag + ".csv",
                                    render([&](std::ostream& os) {
                                        write_correlation(os, est);
                                    }));
                PowerLawFit fit = fit_power_law(est, config.breakpoints, 1,
                                                config.abs_max_lag);
                writer.write_output("powerlaw", "powerlaw_" + tag + ".csv",
                                    render([&](std::ostream& os) {
                                        write_power_law(os, fit);
                                    }));
            }});
        }
        if (config.analysis_enabled("cluster")) {
            for (std::int64_t scale : config.cluster_scales) {
                for (double q : config.q_list) {
                    std::string name = "cluster_" + tag + "_q" +
                                       std::to_string(static_cast<int>(q)) + "_s" +
                                       std::to_string(scale);
                    tasks.push_back({name, [=, &writer, &config] {
                        ReturnSeries abs_r =
                            absolute_returns(log_returns(resample(*volumes, scale)));
                        ClusterProbEstimate est = cluster_prob(abs_r, q, config.max_tau);
                        writer.write_output("cluster", name + ".csv",
                                            render([&](std::ostream& os) {
                                                write_cluster_prob(os, est);
                                            }));
                    }});
                }
            }
        }
        if (config.analysis_enabled("streaks")) {
            tasks.push_back({"streaks_" + tag, [=, &writer, &config] {
                auto records = detect_streaks(*quotes_ptr);
                writer.write_output("streaks", "streaks_" + tag + ".csv",
                                    render([&](std::ostream& os) {
                                        write_streak_records(os, records);
                                    }));
                auto dist = streak_duration_distribution(records);
                writer.write_output("streaks", "streak_dist_" + tag + ".csv",
                                    render([&](std::ostream& os) {
                                        write_streak_distribution(os, dist);
                                    }));
                StreakFit fit = fit_extreme_volume_decay(records, config.top_k, config.d_max);
                writer.write_output("streaks", "streak_fit_" + tag + ".csv",
                                    render([&](std::ostream& os) {
                                        write_streak_fit(os, fit);
                                    }));
            }});
        }
    }
    if (config.analysis_enabled("excess")) {
        tasks.push_back({"excess", [&] {
            VolumeSeries ask = best_volume_series(stream, Side::ask);
            VolumeSeries bid = best_volume_series(stream, Side::bid);
            ExcessSeries ex = excess_volume(ask, bid);
            writer.write_output("excess", "excess.csv", render([&](std::ostream& os) {
                                    write_excess_series(os, ex);
                                }));
            ExcessDistribution dist = excess_distribution(ex);
            writer.write_output("excess", "excess_hist.csv", render([&](std::ostream& os) {
                                    write_excess_distribution(os, dist);
                                }));
        }});
    }

    // Independent analyses; failures are per-task, not fatal.
    parallel_for(tasks.size(), config.max_threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            try {
                tasks[i].run();
            } catch (const std::exception& e) {
                writer.record_failure(tasks[i].name, e.what());
            }
        }
    });

    nlohmann::ordered_json manifest;
    manifest["config"] = config_json(config);
    manifest["parse"] = {{"lines_read", parse_report.lines_read},
                         {"records_ok", parse_report.records_ok},
                         {"quarantined", parse_report.quarantined.size()},
                         {"segments", stream.segments.size()}};
    manifest["outputs"] = writer.outputs();
    manifest["failures"] = writer.failures();

    ReportOutcome outcome;
    outcome.failed_analyses = writer.failed_names();
    outcome.exit_code = outcome.failed_analyses.empty() ? 0 : 3;
    manifest["status"] = outcome.exit_code == 0 ? "ok" : "partial";

    std::filesystem::path manifest_path = dir / "manifest.json";
    std::ofstream mout(manifest_path, std::ios::binary);
    mout << manifest.dump(2) << '\n';
    outcome.manifest_path = manifest_path.string();
    return outcome;
}

}  // namespace lobvol
