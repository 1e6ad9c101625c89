#include "usage_synth/cli.hpp"

#include "usage_synth/baseline.hpp"
#include "usage_synth/chat_client.hpp"
#include "usage_synth/config.hpp"
#include "usage_synth/io.hpp"
#include "usage_synth/mock_endpoint.hpp"
#include "usage_synth/pipeline.hpp"
#include "usage_synth/prompts.hpp"
#include "usage_synth/report.hpp"
#include "usage_synth/sessionizer.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <sstream>

namespace usage_synth {

namespace fs = std::filesystem;

namespace {

// Served by --mock when no --mock-reply file is given.
constexpr std::string_view kCannedReply = R"(Here is the generated dataset.

```csv
id,created-at,app-id,time-seconds
1,2025-04-18T07:58:10,WhatsApp,35
2,2025-04-18T07:59:02,Google Chrome,120
3,2025-04-18T08:03:40,Instagram,64
4,2025-04-18T12:15:00,Google Maps,210
5,2025-04-18T12:20:31,Google Chrome,95
6,2025-04-18T18:44:12,Lichess,900
7,2025-04-18T19:02:03,WhatsApp,41
8,2025-04-18T22:30:55,Instagram,300
```
)";

// Thrown inside a command to leave with a specific exit code.
struct CommandExit {
    int code;
};

struct CommonFlags {
    std::string config_path;
    std::map<std::string, std::string> overrides;  // settings key -> raw value
    std::string json_out;
};

void add_setting_flag(CLI::App* cmd, CommonFlags& flags, const std::string& flag, const std::string& key,
                      const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [&flags, key](const std::string& v) { flags.overrides[key] = v; }, help);
}

void add_eval_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "Flat key = value config file");
    add_setting_flag(cmd, flags, "--gap-threshold", "gap_threshold_s", "Session gap threshold in seconds");
    add_setting_flag(cmd, flags, "--k", "k", "Number of top apps compared with the seed");
    add_setting_flag(cmd, flags, "--ks-fail-threshold", "ks_fail_threshold", "Fail B4/B5 above this KS value");
    add_setting_flag(cmd, flags, "--alias-file", "alias_file", "Extra app-name aliases");
}

void add_endpoint_flags(CLI::App* cmd, CommonFlags& flags) {
    add_setting_flag(cmd, flags, "--endpoint", "endpoint", "Chat-completions base URL");
    add_setting_flag(cmd, flags, "--model", "model", "Model name");
    add_setting_flag(cmd, flags, "--timeout", "timeout_s", "Request timeout in seconds");
    add_setting_flag(cmd, flags, "--retries", "retries", "Retries after a transport failure");
    add_setting_flag(cmd, flags, "--temperature", "temperature", "Sampling temperature");
}

class Runner {
public:
    Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    Settings settings(const CommonFlags& flags) const {
        Settings s;
        if (!flags.config_path.empty()) {
            s = load_settings(load(flags.config_path));
        }
        for (const auto& [key, value] : flags.overrides) {
            s.set(key, value);
        }
        s.validate();
        return s;
    }

    RealismConfig realism_config(const Settings& s) const {
        RealismConfig rc;
        rc.gap_threshold_s = s.gap_threshold_s;
        rc.top_k = s.k;
        rc.ks_fail_threshold = s.ks_fail_threshold;
        if (s.alias_file) {
            try {
                rc.names.load_aliases(load(*s.alias_file));
            } catch (const std::runtime_error& e) {
                throw ConfigError(*s.alias_file + ": " + e.what());
            }
        }
        return rc;
    }

    std::string load(const std::string& path) const {
        try {
            return read_file(path);
        } catch (const std::exception& e) {
            err_ << "error: " << e.what() << "\n";
            throw CommandExit{kExitUsage};
        }
    }

    UsageDataset load_dataset(const std::string& path, Provenance provenance = {}) const {
        if (provenance.source.empty()) {
            provenance.source = path;
        }
        const auto text = load(path);
        try {
            return parse_dataset(text, std::move(provenance));
        } catch (const ParseError& e) {
            err_ << "error: " << path << ": " << e.what() << "\n";
            throw CommandExit{kExitFatalParse};
        }
    }

    void emit_report(const FullReport& report, const std::string& json_out) const {
        out_ << summary_table(report);
        if (!json_out.empty()) {
            write_file_atomic(json_out, report_to_json(report).dump(2) + "\n");
            out_ << "report: " << json_out << "\n";
        }
    }

    EndpointConfig endpoint(const Settings& s, const MockChatServer* mock) const {
        EndpointConfig ep;
        ep.base_url = mock ? mock->base_url() : s.endpoint;
        ep.model = s.model.empty() ? (mock ? "mock" : "") : s.model;
        ep.api_key = api_key_from_env();
        ep.timeout_s = s.timeout_s;
        ep.retries = s.retries;
        ep.temperature = s.temperature;
        if (ep.base_url.empty()) {
            err_ << "error: no endpoint configured (use --endpoint, the config file, or --mock)\n";
            throw CommandExit{kExitUsage};
        }
        if (ep.model.empty()) {
            err_ << "error: no model configured (use --model or the config file)\n";
            throw CommandExit{kExitUsage};
        }
        return ep;
    }

    std::unique_ptr<MockChatServer> start_mock(bool enabled, const std::vector<std::string>& reply_files) const {
        if (!enabled) {
            return nullptr;
        }
        std::vector<std::string> replies;
        for (const auto& f : reply_files) {
            replies.push_back(load(f));
        }
        if (replies.empty()) {
            replies.emplace_back(kCannedReply);
        }
        return std::make_unique<MockChatServer>(std::move(replies));
    }

    std::ostream& out_;
    std::ostream& err_;
};

PromptLabel parse_label(const std::string& s) {
    const auto label = prompt_label_from_string(s);
    if (!label) {
        throw CLI::ValidationError("label", "expected one of P1, P2, P3, P4, got '" + s + "'");
    }
    return *label;
}

// ---- check

struct CheckArgs {
    CommonFlags flags;
    std::string dataset;
    std::string seed;
};

int cmd_check(const Runner& r, const CheckArgs& a) {
    const auto settings = r.settings(a.flags);
    const auto rc = r.realism_config(settings);

    std::optional<UsageDataset> seed;
    if (!a.seed.empty()) {
        seed = r.load_dataset(a.seed);
    }

    FullReport report;
    const auto text = r.load(a.dataset);
    try {
        Provenance prov;
        prov.source = a.dataset;
        const auto dataset = parse_dataset(text, prov);
        report = evaluate_dataset(dataset, seed ? &*seed : nullptr, rc);
    } catch (const ParseError& e) {
        report = fatal_report(e);
        report.provenance.source = a.dataset;
    }
    report.dataset_ref = a.dataset;
    if (seed) {
        report.seed_ref = a.seed;
    }
    report.config_echo = settings.to_json();
    r.emit_report(report, a.flags.json_out);

    if (report.fatal_error) {
        return kExitFatalParse;
    }
    return has_hard_failure(report) ? kExitFailed : kExitOk;
}

// ---- generate-baseline

struct BaselineArgs {
    CommonFlags flags;
    std::string seed;
    std::string date;
    std::string out;
};

int cmd_generate_baseline(const Runner& r, const BaselineArgs& a) {
    const auto settings = r.settings(a.flags);
    const auto day = parse_date(a.date);
    if (!day) {
        r.err_ << "error: --date expects YYYY-MM-DD, got '" << a.date << "'\n";
        return kExitUsage;
    }
    const auto seed = r.load_dataset(a.seed);

    SeedProfile profile;
    try {
        profile = profile_seed(seed);
    } catch (const InvalidSeed& e) {
        r.err_ << "error: " << a.seed << ": " << e.what() << "\n";
        return kExitFailed;
    }

    GenConfig gen;
    gen.target_log_count = settings.target_log_count;
    gen.seed_value = settings.rng_seed;
    gen.duration_jitter_pct = settings.jitter_pct;
    gen.quiet_window = settings.quiet_window;
    const auto dataset = generate_day(profile, *day, gen);

    const auto out_path = a.out.empty() ? "baseline_" + a.date + ".csv" : a.out;
    write_file_atomic(out_path, write_dataset(dataset));

    std::int64_t total_s = 0;
    for (const auto& log : dataset.logs) {
        total_s += log.duration_s;
    }
    r.out_ << "wrote " << out_path << "\n"
           << "logs " << dataset.logs.size() << ", total " << nlohmann::json(round_hours(total_s)).dump()
           << " h, apps " << app_stats(dataset).app_count << "\n";
    return kExitOk;
}

// ---- prompt

struct PromptArgs {
    std::string label;
    std::string seed;
    std::string out;
};

int cmd_prompt(const Runner& r, const PromptArgs& a) {
    const auto label = parse_label(a.label);
    std::optional<std::string> seed;
    if (!a.seed.empty()) {
        seed = r.load(a.seed);
    }
    PromptSpec prompt;
    try {
        prompt = build_prompt(label, seed ? std::optional<std::string_view>{*seed} : std::nullopt);
    } catch (const PromptError& e) {
        r.err_ << "error: " << e.what() << "\n";
        return kExitFailed;
    }
    const auto text = render_prompt_file(prompt);
    if (a.out.empty()) {
        r.out_ << text;
    } else {
        write_file_atomic(a.out, text);
        r.out_ << "wrote " << a.out << "\n";
    }
    return kExitOk;
}

// ---- run

struct RunArgs {
    CommonFlags flags;
    std::string label;
    std::string seed;
    std::string reference;
    std::string out_dir = "runs";
    bool mock = false;
    std::vector<std::string> mock_replies;
};

nlohmann::ordered_json attempt_row(int attempt, const FullReport& rep, const std::string& dir) {
    nlohmann::ordered_json row;
    row["attempt"] = attempt;
    row["dir"] = dir;
    row["S1"] = std::string{to_string(rep.compliance.s1.status)};
    row["S2"] = std::string{to_string(rep.compliance.s2.status)};
    row["S3"] = std::string{to_string(rep.compliance.s3.status)};
    if (rep.realism) {
        const auto& re = *rep.realism;
        row["B1"] = std::string{to_string(re.b1.status)};
        row["total_usage_h"] = re.b1.total_usage_h;
        row["B2"] = std::string{to_string(re.b2.status)};
        row["longest_gap"] = re.b2.longest_gap_s ? nlohmann::ordered_json(format_hms(*re.b2.longest_gap_s))
                                                 : nlohmann::ordered_json(nullptr);
        row["app_count"] = re.b3.app_count;
        row["top_k_overlap_pct"] = re.b3.top_k_overlap_pct ? nlohmann::ordered_json(*re.b3.top_k_overlap_pct)
                                                           : nlohmann::ordered_json(nullptr);
    } else {
        row["fatal_error"] = rep.fatal_error ? *rep.fatal_error : "";
    }
    return row;
}

std::string comparison_text(const std::string& label, const nlohmann::ordered_json& rows) {
    std::ostringstream s;
    auto cell = [](const nlohmann::ordered_json& row, const char* key) {
        if (!row.contains(key) || row[key].is_null()) {
            return std::string{"-"};
        }
        return row[key].is_string() ? row[key].get<std::string>() : row[key].dump();
    };
    s << std::left << std::setw(8) << "run" << std::setw(16) << "S1" << std::setw(16) << "S2" << std::setw(16) << "S3"
      << std::setw(10) << "total_h" << std::setw(16) << "B1" << std::setw(12) << "longest" << std::setw(16) << "B2"
      << std::setw(6) << "apps" << "top_k_%\n";
    for (const auto& row : rows) {
        s << std::setw(8) << (label + "." + row["attempt"].dump()) << std::setw(16) << cell(row, "S1")
          << std::setw(16) << cell(row, "S2") << std::setw(16) << cell(row, "S3") << std::setw(10)
          << cell(row, "total_usage_h") << std::setw(16) << cell(row, "B1") << std::setw(12)
          << cell(row, "longest_gap") << std::setw(16) << cell(row, "B2") << std::setw(6) << cell(row, "app_count")
          << cell(row, "top_k_overlap_pct") << "\n";
    }
    return s.str();
}

int cmd_run(const Runner& r, const RunArgs& a) {
    const auto settings = r.settings(a.flags);
    const auto label = parse_label(a.label);
    const auto rc = r.realism_config(settings);

    std::optional<std::string> seed_text;
    std::optional<UsageDataset> seed;
    if (!a.seed.empty()) {
        seed_text = r.load(a.seed);
    }
    PromptSpec prompt;
    try {
        prompt = build_prompt(label, seed_text ? std::optional<std::string_view>{*seed_text} : std::nullopt);
    } catch (const PromptError& e) {
        r.err_ << "error: " << e.what() << "\n";
        return kExitFailed;
    }
    // Comparative metrics use the seed, or an explicit reference for unseeded prompts.
    std::string reference_path = !a.reference.empty() ? a.reference : a.seed;
    if (!reference_path.empty()) {
        seed = r.load_dataset(reference_path);
    }

    const auto mock = r.start_mock(a.mock, a.mock_replies);
    const auto ep = r.endpoint(settings, mock.get());
    const fs::path root = a.out_dir;

    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    int status = kExitOk;
    for (int attempt = 1; attempt <= settings.attempts; ++attempt) {
        const auto dir = root / (std::string{to_string(label)} + "_attempt_" + std::to_string(attempt));
        GenerationRun run;
        try {
            run = run_generation(prompt, ep, attempt, dir);
        } catch (const TransportError& e) {
            r.err_ << "error: attempt " << attempt << ": " << e.what() << " (after " << e.attempts()
                   << " tries)\n";
            status = kExitEndpoint;
            break;
        } catch (const std::exception& e) {
            r.err_ << "error: attempt " << attempt << ": " << e.what() << "\n";
            status = kExitEndpoint;
            break;
        }

        Provenance prov;
        prov.origin = Origin::synthetic;
        prov.prompt_label = label;
        prov.attempt = attempt;
        prov.reply_count = run.reply_count;
        prov.source = dir.string();

        FullReport report;
        if (run.extracted_csv) {
            try {
                report = evaluate_dataset(parse_dataset(*run.extracted_csv, prov), seed ? &*seed : nullptr, rc);
            } catch (const ParseError& e) {
                report = fatal_report(e);
            }
        } else {
            report = fatal_report(ParseError(FindingCode::MissingColumn, "reply contains no CSV header line"));
        }
        report.provenance = prov;
        report.dataset_ref = (dir / "extracted.csv").string();
        if (seed) {
            report.seed_ref = reference_path;
        }
        report.config_echo = settings.to_json();
        write_file_atomic(dir / "report.json", report_to_json(report).dump(2) + "\n");

        r.out_ << "== " << to_string(label) << " attempt " << attempt << " (" << dir.string() << ")\n";
        for (const auto& w : run.warnings) {
            r.out_ << "warning: " << w << "\n";
        }
        r.out_ << summary_table(report);
        rows.push_back(attempt_row(attempt, report, dir.string()));
    }

    nlohmann::ordered_json summary;
    summary["tool_version"] = std::string{kToolVersion};
    summary["prompt_label"] = std::string{to_string(label)};
    summary["endpoint"] = ep.base_url;
    summary["model"] = ep.model;
    summary["mock"] = a.mock;
    summary["attempts"] = rows;
    summary["config"] = settings.to_json();
    const auto table = comparison_text(std::string{to_string(label)}, rows);
    write_file_atomic(root / "summary.json", summary.dump(2) + "\n");
    write_file_atomic(root / "summary.txt", table);
    r.out_ << "== comparison\n" << table;
    return status;
}

// ---- histogram

struct HistogramArgs {
    CommonFlags flags;
    std::string dataset;
    std::string mode = "session";
    std::string kind = "duration";
    std::string out;
};

int cmd_histogram(const Runner& r, const HistogramArgs& a) {
    const auto settings = r.settings(a.flags);
    const auto dataset = r.load_dataset(a.dataset);
    const bool gaps = a.kind == "gap";
    const bool sessions = a.mode == "session";

    if (dataset.has_date_only_timestamps() && (gaps || sessions)) {
        r.err_ << "error: " << a.dataset << " has date-only timestamps; " << a.mode << " " << a.kind
               << " values need times of day\n";
        return kExitFailed;
    }
    std::vector<std::int64_t> values;
    if (sessions) {
        const auto s = sessionize(dataset, settings.gap_threshold_s);
        values = gaps ? session_gaps(s).gaps_s : session_durations(s);
    } else if (gaps) {
        values = std::move(log_level_units(dataset).gaps.gaps_s);
    } else {
        // Durations need no time of day, so date-only data is fine here.
        for (const auto& log : dataset.logs) {
            values.push_back(log.duration_s);
        }
    }

    std::string csv = "bin_low,bin_high,count\n";
    if (!values.empty()) {
        const auto h = build_histogram(values);
        for (std::size_t i = 0; i < h.counts.size(); ++i) {
            const auto high = Histogram::high_edge(i);
            csv += std::to_string(Histogram::kLowEdges[i]) + "," + (high ? std::to_string(*high) : "inf") + "," +
                   std::to_string(h.counts[i]) + "\n";
        }
    }
    if (a.out.empty()) {
        r.out_ << csv;
    } else {
        write_file_atomic(a.out, csv);
        r.out_ << "wrote " << a.out << " (" << values.size() << " values)\n";
    }
    return kExitOk;
}

// ---- self-prompt

struct SelfPromptArgs {
    CommonFlags flags;
    std::string out_dir = "self_prompt";
    bool mock = false;
    std::vector<std::string> mock_replies;
};

int cmd_self_prompt(const Runner& r, const SelfPromptArgs& a) {
    const auto settings = r.settings(a.flags);
    const auto mock = r.start_mock(a.mock, a.mock_replies);
    const auto ep = r.endpoint(settings, mock.get());
    try {
        const auto result = self_prompt(ep, fs::path{a.out_dir});
        for (const auto& w : result.warnings) {
            r.out_ << "warning: " << w << "\n";
        }
        r.out_ << "wrote " << (fs::path{a.out_dir} / "self_prompt_detailed.txt").string() << " and "
               << (fs::path{a.out_dir} / "self_prompt_seeded.txt").string() << "\n";
    } catch (const TransportError& e) {
        r.err_ << "error: " << e.what() << " (after " << e.attempts() << " tries)\n";
        return kExitEndpoint;
    } catch (const HttpError& e) {
        r.err_ << "error: " << e.what() << "\n";
        return kExitEndpoint;
    } catch (const MalformedReply& e) {
        r.err_ << "error: " << e.what() << "\n";
        return kExitEndpoint;
    }
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generate and evaluate synthetic smartphone usage logs", "usage-synth"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string{kToolVersion});

    const Runner runner(out, err);
    std::function<int()> action;

    CheckArgs check;
    auto* c = app.add_subcommand("check", "Evaluate a dataset against structural and realism criteria");
    c->add_option("dataset", check.dataset, "Usage log CSV")->required();
    c->add_option("--seed", check.seed, "Seed dataset for comparative metrics");
    c->add_option("--json-out", check.flags.json_out, "Write the JSON report here");
    add_eval_flags(c, check.flags);
    c->callback([&] { action = [&] { return cmd_check(runner, check); }; });

    BaselineArgs base;
    auto* g = app.add_subcommand("generate-baseline", "Resample one synthetic day from a seed dataset");
    g->add_option("--seed", base.seed, "Seed dataset")->required();
    g->add_option("--date", base.date, "Day to generate (YYYY-MM-DD)")->required();
    g->add_option("--out", base.out, "Output CSV (default baseline_<date>.csv)");
    g->add_option("--config", base.flags.config_path, "Flat key = value config file");
    add_setting_flag(g, base.flags, "--target-logs", "target_log_count", "Logs per day (default: seed size)");
    add_setting_flag(g, base.flags, "--rng-seed", "rng_seed", "Random seed");
    add_setting_flag(g, base.flags, "--jitter", "jitter_pct", "Duration jitter in percent");
    add_setting_flag(g, base.flags, "--quiet-window", "quiet_window", "Hours without starts, e.g. 1-8, or none");
    g->callback([&] { action = [&] { return cmd_generate_baseline(runner, base); }; });

    PromptArgs prompt;
    auto* p = app.add_subcommand("prompt", "Write the resolved prompt messages to a text file");
    p->add_option("label", prompt.label, "P1, P2, P3 or P4")->required();
    p->add_option("--seed", prompt.seed, "Seed CSV (P2 and P4 only)");
    p->add_option("--out", prompt.out, "Output file (default stdout)");
    p->callback([&] { action = [&] { return cmd_prompt(runner, prompt); }; });

    RunArgs run;
    auto* rn = app.add_subcommand("run", "Generate datasets through a chat endpoint and evaluate them");
    rn->add_option("label", run.label, "P1, P2, P3 or P4")->required();
    rn->add_option("--seed", run.seed, "Seed CSV (P2 and P4 only)");
    rn->add_option("--reference", run.reference, "Comparison dataset when the prompt has no seed");
    rn->add_option("--out-dir", run.out_dir, "Directory for per-attempt artifacts")->capture_default_str();
    add_setting_flag(rn, run.flags, "--attempts", "attempts", "Independent runs of the prompt");
    rn->add_flag("--mock", run.mock, "Serve replies from a local mock endpoint");
    rn->add_option("--mock-reply", run.mock_replies, "Reply file for --mock, repeatable, served in order");
    add_eval_flags(rn, run.flags);
    add_endpoint_flags(rn, run.flags);
    rn->callback([&] { action = [&] { return cmd_run(runner, run); }; });

    HistogramArgs hist;
    auto* h = app.add_subcommand("histogram", "Emit log-binned histogram CSV for plotting");
    h->add_option("dataset", hist.dataset, "Usage log CSV")->required();
    h->add_option("--mode", hist.mode, "Grouping: log or session")
        ->check(CLI::IsMember({"log", "session"}))
        ->capture_default_str();
    h->add_option("--kind", hist.kind, "Values: duration or gap")
        ->check(CLI::IsMember({"duration", "gap"}))
        ->capture_default_str();
    h->add_option("--out", hist.out, "Output CSV (default stdout)");
    h->add_option("--config", hist.flags.config_path, "Flat key = value config file");
    add_setting_flag(h, hist.flags, "--gap-threshold", "gap_threshold_s", "Session gap threshold in seconds");
    h->callback([&] { action = [&] { return cmd_histogram(runner, hist); }; });

    SelfPromptArgs sp;
    auto* s = app.add_subcommand("self-prompt", "Ask the model to write detailed generation prompts");
    s->add_option("--out-dir", sp.out_dir, "Directory for the generated prompt files")->capture_default_str();
    s->add_option("--config", sp.flags.config_path, "Flat key = value config file");
    s->add_flag("--mock", sp.mock, "Serve replies from a local mock endpoint");
    s->add_option("--mock-reply", sp.mock_replies, "Reply file for --mock, repeatable, served in order");
    add_endpoint_flags(s, sp.flags);
    s->callback([&] { action = [&] { return cmd_self_prompt(runner, sp); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        return action ? action() : kExitUsage;
    } catch (const CommandExit& e) {
        return e.code;
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "error: config: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"usage-synth"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace usage_synth
