#include "usage_synth/report.hpp"

#include <iomanip>
#include <sstream>

namespace usage_synth {

using ojson = nlohmann::ordered_json;

namespace {

template <typename T>
ojson opt(const std::optional<T>& v) {
    return v ? ojson(*v) : ojson(nullptr);
}

template <typename T>
std::optional<T> get_opt(const ojson& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    return j.at(key).get<T>();
}

CheckStatus status_of(const ojson& j) {
    const auto s = j.at("status").get<std::string>();
    const auto status = check_status_from_string(s);
    if (!status) {
        throw std::runtime_error("unknown status '" + s + "'");
    }
    return *status;
}

Timestamp timestamp_of(const ojson& j) {
    const auto text = j.get<std::string>();
    const auto ts = parse_timestamp(text);
    if (!ts) {
        throw std::runtime_error("bad timestamp '" + text + "' in report");
    }
    return ts->value;
}

ojson finding_json(const StructuralFinding& f) {
    return ojson{{"code", std::string{to_string(f.code)}}, {"row", opt(f.row)}, {"detail", f.detail}};
}

StructuralFinding finding_of(const ojson& j) {
    const auto code = finding_code_from_string(j.at("code").get<std::string>());
    if (!code) {
        throw std::runtime_error("unknown finding code in report");
    }
    return {*code, get_opt<std::size_t>(j, "row"), j.at("detail").get<std::string>()};
}

ojson check_json(const CheckResult& c) {
    ojson findings = ojson::array();
    for (const auto& f : c.findings) {
        findings.push_back(finding_json(f));
    }
    return ojson{{"status", std::string{to_string(c.status)}}, {"detail", c.detail}, {"findings", findings}};
}

CheckResult check_of(const ojson& j) {
    CheckResult c;
    c.status = status_of(j);
    c.detail = j.at("detail").get<std::string>();
    for (const auto& f : j.at("findings")) {
        c.findings.push_back(finding_of(f));
    }
    return c;
}

ojson histogram_json(const Histogram& h) {
    ojson bins = ojson::array();
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        bins.push_back({{"low", Histogram::kLowEdges[i]}, {"high", opt(Histogram::high_edge(i))}, {"count", h.counts[i]}});
    }
    return ojson{{"bins", bins}, {"total", h.total}};
}

Histogram histogram_of(const ojson& j) {
    Histogram h;
    const auto& bins = j.at("bins");
    if (bins.size() != h.counts.size()) {
        throw std::runtime_error("histogram has unexpected bin count");
    }
    for (std::size_t i = 0; i < bins.size(); ++i) {
        h.counts[i] = bins[i].at("count").get<std::int64_t>();
    }
    h.total = j.at("total").get<std::int64_t>();
    return h;
}

ojson distribution_json(const DistributionResult& d) {
    return ojson{{"status", std::string{to_string(d.status)}},
                 {"ks_stat", opt(d.ks_stat)},
                 {"wasserstein_log10", opt(d.wasserstein_log10)},
                 {"histogram", histogram_json(d.histogram)},
                 {"detail", d.detail}};
}

DistributionResult distribution_of(const ojson& j) {
    DistributionResult d;
    d.status = status_of(j);
    d.ks_stat = get_opt<double>(j, "ks_stat");
    d.wasserstein_log10 = get_opt<double>(j, "wasserstein_log10");
    d.histogram = histogram_of(j.at("histogram"));
    d.detail = j.at("detail").get<std::string>();
    return d;
}

ojson grouped_json(const GroupedDistributions& g) {
    return ojson{{"log_level", distribution_json(g.log_level)}, {"session_level", distribution_json(g.session_level)}};
}

GroupedDistributions grouped_of(const ojson& j) {
    return {distribution_of(j.at("log_level")), distribution_of(j.at("session_level"))};
}

ojson realism_json(const RealismReport& r) {
    ojson per_day = ojson::array();
    for (const auto& d : r.b1.per_day) {
        per_day.push_back({{"date", format_date(d.day)}, {"total_s", d.total_s}, {"total_h", round_hours(d.total_s)}});
    }
    ojson b1{{"status", std::string{to_string(r.b1.status)}},
             {"total_usage_h", r.b1.total_usage_h},
             {"total_usage_s", r.b1.total_usage_s},
             {"per_day", per_day},
             {"detail", r.b1.detail}};

    ojson b2{{"status", std::string{to_string(r.b2.status)}},
             {"longest_gap_s", opt(r.b2.longest_gap_s)},
             {"longest_gap_hms", r.b2.longest_gap_s ? ojson(format_hms(*r.b2.longest_gap_s)) : ojson(nullptr)},
             {"gap_start", r.b2.gap_start ? ojson(format_timestamp(*r.b2.gap_start)) : ojson(nullptr)},
             {"gap_end", r.b2.gap_end ? ojson(format_timestamp(*r.b2.gap_end)) : ojson(nullptr)},
             {"sleep_overlap_s", r.b2.sleep_overlap_s},
             {"qualifying_gap_found", r.b2.qualifying_gap_found},
             {"detail", r.b2.detail}};

    ojson top = ojson::array();
    for (const auto& [app, secs] : r.b3.top_k) {
        top.push_back({{"app", app}, {"time_s", secs}});
    }
    ojson b3{{"status", std::string{to_string(r.b3.status)}},
             {"app_count", r.b3.app_count},
             {"top_k", top},
             {"top_k_overlap_pct", opt(r.b3.top_k_overlap_pct)},
             {"detail", r.b3.detail}};

    return ojson{{"B1", b1}, {"B2", b2}, {"B3", b3}, {"B4", grouped_json(r.b4)}, {"B5", grouped_json(r.b5)}};
}

RealismReport realism_of(const ojson& j) {
    RealismReport r;
    const auto& b1 = j.at("B1");
    r.b1.status = status_of(b1);
    r.b1.total_usage_h = b1.at("total_usage_h").get<double>();
    r.b1.total_usage_s = b1.at("total_usage_s").get<std::int64_t>();
    for (const auto& d : b1.at("per_day")) {
        const auto day = parse_date(d.at("date").get<std::string>());
        if (!day) {
            throw std::runtime_error("bad date in report");
        }
        r.b1.per_day.push_back({*day, d.at("total_s").get<std::int64_t>()});
    }
    r.b1.detail = b1.at("detail").get<std::string>();

    const auto& b2 = j.at("B2");
    r.b2.status = status_of(b2);
    r.b2.longest_gap_s = get_opt<std::int64_t>(b2, "longest_gap_s");
    if (!b2.at("gap_start").is_null()) {
        r.b2.gap_start = timestamp_of(b2.at("gap_start"));
    }
    if (!b2.at("gap_end").is_null()) {
        r.b2.gap_end = timestamp_of(b2.at("gap_end"));
    }
    r.b2.sleep_overlap_s = b2.at("sleep_overlap_s").get<std::int64_t>();
    r.b2.qualifying_gap_found = b2.at("qualifying_gap_found").get<bool>();
    r.b2.detail = b2.at("detail").get<std::string>();

    const auto& b3 = j.at("B3");
    r.b3.status = status_of(b3);
    r.b3.app_count = b3.at("app_count").get<std::size_t>();
    for (const auto& t : b3.at("top_k")) {
        r.b3.top_k.emplace_back(t.at("app").get<std::string>(), t.at("time_s").get<std::int64_t>());
    }
    r.b3.top_k_overlap_pct = get_opt<double>(b3, "top_k_overlap_pct");
    r.b3.detail = b3.at("detail").get<std::string>();

    r.b4 = grouped_of(j.at("B4"));
    r.b5 = grouped_of(j.at("B5"));
    return r;
}

std::string num(const ojson& value) {
    return value.dump();
}

// Distinct finding codes, first-seen order.
std::string codes(const CheckResult& c) {
    std::string out;
    for (const auto& f : c.findings) {
        const std::string code{to_string(f.code)};
        if (out.find(code) == std::string::npos) {
            out += (out.empty() ? "" : " ") + code;
        }
    }
    return out.empty() ? "-" : out;
}

}  // namespace

FullReport evaluate_dataset(const UsageDataset& dataset, const UsageDataset* seed, const RealismConfig& config) {
    FullReport report;
    report.provenance = dataset.provenance;
    report.compliance = check_compliance(dataset);
    report.realism = evaluate_realism(dataset, seed, config);
    return report;
}

FullReport fatal_report(const ParseError& error) {
    FullReport report;
    report.fatal_error = error.what();
    report.compliance.s1 = check_s1_fatal(error);
    report.compliance.s2 = CheckResult{CheckStatus::not_assessable, {}, "dataset could not be parsed"};
    report.compliance.s3 = CheckResult{CheckStatus::not_assessable, {}, "dataset could not be parsed"};
    return report;
}

ojson report_to_json(const FullReport& report) {
    ojson j;
    j["tool_version"] = report.tool_version;
    j["dataset_ref"] = report.dataset_ref;
    j["seed_ref"] = opt(report.seed_ref);
    j["provenance"] = ojson{
        {"origin", std::string{to_string(report.provenance.origin)}},
        {"prompt_label", report.provenance.prompt_label ? ojson(std::string{to_string(*report.provenance.prompt_label)})
                                                        : ojson(nullptr)},
        {"attempt", opt(report.provenance.attempt)},
        {"reply_count", opt(report.provenance.reply_count)},
        {"source", report.provenance.source},
    };
    j["fatal_error"] = opt(report.fatal_error);
    j["compliance"] = ojson{{"S1", check_json(report.compliance.s1)},
                            {"S2", check_json(report.compliance.s2)},
                            {"S3", check_json(report.compliance.s3)}};
    j["realism"] = report.realism ? realism_json(*report.realism) : ojson(nullptr);
    j["config"] = report.config_echo;
    return j;
}

FullReport report_from_json(const ojson& j) {
    FullReport r;
    r.tool_version = j.at("tool_version").get<std::string>();
    r.dataset_ref = j.at("dataset_ref").get<std::string>();
    r.seed_ref = get_opt<std::string>(j, "seed_ref");
    const auto& p = j.at("provenance");
    const auto origin = origin_from_string(p.at("origin").get<std::string>());
    if (!origin) {
        throw std::runtime_error("unknown origin in report");
    }
    r.provenance.origin = *origin;
    if (const auto label = get_opt<std::string>(p, "prompt_label")) {
        r.provenance.prompt_label = prompt_label_from_string(*label);
    }
    r.provenance.attempt = get_opt<int>(p, "attempt");
    r.provenance.reply_count = get_opt<int>(p, "reply_count");
    r.provenance.source = p.at("source").get<std::string>();
    r.fatal_error = get_opt<std::string>(j, "fatal_error");
    const auto& c = j.at("compliance");
    r.compliance = {check_of(c.at("S1")), check_of(c.at("S2")), check_of(c.at("S3"))};
    if (!j.at("realism").is_null()) {
        r.realism = realism_of(j.at("realism"));
    }
    r.config_echo = j.at("config");
    return r;
}

bool has_hard_failure(const FullReport& report) {
    const auto failed = [](CheckStatus s) { return s == CheckStatus::fail; };
    if (failed(report.compliance.s1.status) || failed(report.compliance.s2.status)) {
        return true;
    }
    return report.realism && (failed(report.realism->b1.status) || failed(report.realism->b2.status));
}

std::string summary_table(const FullReport& report) {
    std::ostringstream out;
    auto row = [&](std::string_view name, CheckStatus status, const std::string& key) {
        out << std::left << std::setw(10) << name << std::setw(16) << to_string(status) << key << "\n";
    };
    out << std::left << std::setw(10) << "criterion" << std::setw(16) << "status" << "key number\n";
    const auto& s1 = report.compliance.s1;
    row("S1", s1.status, report.fatal_error ? "fatal: " + *report.fatal_error : codes(s1));
    row("S2", report.compliance.s2.status, codes(report.compliance.s2));
    row("S3", report.compliance.s3.status,
        report.provenance.reply_count ? "replies " + num(*report.provenance.reply_count) : "-");
    if (!report.realism) {
        return out.str();
    }
    const auto& r = *report.realism;
    row("B1", r.b1.status, "total " + num(r.b1.total_usage_h) + " h");
    if (r.b2.longest_gap_s) {
        row("B2", r.b2.status,
            "longest gap " + format_hms(*r.b2.longest_gap_s) + ", sleep-window overlap " + num(r.b2.sleep_overlap_s) +
                " s");
    } else {
        row("B2", r.b2.status, "-");
    }
    std::string b3 = num(r.b3.app_count) + " apps";
    if (r.b3.top_k_overlap_pct) {
        b3 += ", top-k overlap " + num(*r.b3.top_k_overlap_pct) + " %";
    }
    row("B3", r.b3.status, b3);
    auto dist = [&](std::string_view name, const GroupedDistributions& g) {
        auto part = [](const DistributionResult& d) { return d.ks_stat ? "KS " + num(*d.ks_stat) : std::string{"-"}; };
        const auto worst = [](CheckStatus a, CheckStatus b) {
            if (a == CheckStatus::fail || b == CheckStatus::fail) {
                return CheckStatus::fail;
            }
            if (a == CheckStatus::not_assessable || b == CheckStatus::not_assessable) {
                return CheckStatus::not_assessable;
            }
            return a == CheckStatus::report_only || b == CheckStatus::report_only ? CheckStatus::report_only
                                                                                  : CheckStatus::pass;
        };
        row(name, worst(g.log_level.status, g.session_level.status),
            "log " + part(g.log_level) + " | session " + part(g.session_level));
    };
    dist("B4", r.b4);
    dist("B5", r.b5);
    return out.str();
}

}  // namespace usage_synth
