#include "usage_synth/compliance.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>

namespace usage_synth {

namespace {

constexpr std::array<std::string_view, 4> kStatusNames = {"pass", "fail", "not_assessable", "report_only"};

constexpr std::array<FindingCode, 5> kS1FailCodes = {
    FindingCode::BadTimestamp, FindingCode::DateOnlyTimestamp, FindingCode::NegativeDuration,
    FindingCode::DuplicateId,  FindingCode::MalformedRow,
};

constexpr double kAggregateMeanDurationS = 1800.0;

}  // namespace

std::string_view to_string(CheckStatus status) {
    return kStatusNames[static_cast<std::size_t>(status)];
}

std::optional<CheckStatus> check_status_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kStatusNames.size(); ++i) {
        if (kStatusNames[i] == s) {
            return static_cast<CheckStatus>(i);
        }
    }
    return std::nullopt;
}

CheckResult check_s1(const UsageDataset& dataset) {
    CheckResult result;
    for (const auto& f : dataset.findings) {
        if (std::find(kS1FailCodes.begin(), kS1FailCodes.end(), f.code) != kS1FailCodes.end()) {
            result.findings.push_back(f);
        }
    }
    if (result.findings.empty()) {
        result.status = CheckStatus::pass;
        result.detail = "all required fields present and well formed";
    } else {
        result.status = CheckStatus::fail;
        std::map<std::string_view, std::size_t> counts;
        for (const auto& f : result.findings) {
            ++counts[to_string(f.code)];
        }
        for (const auto& [name, n] : counts) {
            result.detail += result.detail.empty() ? "" : "; ";
            result.detail += std::string{name} + " x" + std::to_string(n);
        }
    }
    return result;
}

CheckResult check_s1_fatal(const ParseError& error) {
    return CheckResult{CheckStatus::fail, error.findings(), error.what()};
}

CheckResult check_s2(const UsageDataset& dataset) {
    CheckResult result;
    if (dataset.logs.empty()) {
        result.status = CheckStatus::not_assessable;
        result.detail = "no rows";
        return result;
    }

    // (a) at most one row per (app, calendar day)
    std::map<std::pair<CivilDay, std::string>, std::size_t> per_app_day;
    for (const auto& log : dataset.logs) {
        ++per_app_day[{day_of(log.start), log.app_id}];
    }
    const bool one_row_per_app = std::all_of(per_app_day.begin(), per_app_day.end(),
                                             [](const auto& kv) { return kv.second <= 1; });

    // (b) no usable time of day: all date-only, or one shared instant per day
    const bool all_date_only = std::none_of(dataset.logs.begin(), dataset.logs.end(),
                                            [](const UsageLog& l) { return l.has_time_of_day; });
    std::map<CivilDay, std::set<Timestamp>> instants;
    for (const auto& log : dataset.logs) {
        instants[day_of(log.start)].insert(log.start);
    }
    const bool identical_within_day =
        std::all_of(instants.begin(), instants.end(), [](const auto& kv) { return kv.second.size() == 1; });
    const bool no_time_signal = all_date_only || identical_within_day;

    // (c) long mean duration
    const double total = std::accumulate(dataset.logs.begin(), dataset.logs.end(), 0.0,
                                         [](double acc, const UsageLog& l) { return acc + static_cast<double>(l.duration_s); });
    const double mean = total / static_cast<double>(dataset.logs.size());
    const bool long_rows = mean > kAggregateMeanDurationS;

    auto yes_no = [](bool b) { return b ? "yes" : "no"; };
    result.detail = std::string{"heuristic (approximation): one-row-per-app-day="} + yes_no(one_row_per_app) +
                    ", no-time-of-day-signal=" + yes_no(no_time_signal) + ", mean-duration>1800s=" + yes_no(long_rows) +
                    " (mean " + std::to_string(static_cast<long long>(mean)) + " s)";
    if (one_row_per_app && no_time_signal && long_rows) {
        result.status = CheckStatus::fail;
        result.findings.push_back({FindingCode::AggregatedRows, std::nullopt,
                                   "rows look like per-app usage totals rather than usage events"});
    } else {
        result.status = CheckStatus::pass;
    }
    return result;
}

CheckResult check_s3(const UsageDataset& dataset) {
    CheckResult result;
    const auto& replies = dataset.provenance.reply_count;
    if (!replies) {
        result.status = CheckStatus::not_assessable;
        result.detail = "reply count unknown (no generation provenance)";
    } else if (*replies == 1) {
        result.status = CheckStatus::pass;
        result.detail = "dataset delivered in a single reply";
    } else {
        result.status = CheckStatus::fail;
        result.detail = "dataset assembled from " + std::to_string(*replies) + " replies";
    }
    return result;
}

ComplianceReport check_compliance(const UsageDataset& dataset) {
    return ComplianceReport{check_s1(dataset), check_s2(dataset), check_s3(dataset)};
}

}  // namespace usage_synth
