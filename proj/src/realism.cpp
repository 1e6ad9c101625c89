#include "usage_synth/realism.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace usage_synth {

namespace {

std::vector<std::pair<std::string, std::int64_t>> rank(const std::map<std::string, std::int64_t>& totals) {
    std::vector<std::pair<std::string, std::int64_t>> out(totals.begin(), totals.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) {
            return a.second > b.second;
        }
        return a.first < b.first;
    });
    return out;
}

std::string hours_text(std::int64_t seconds) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f h", round_hours(seconds));
    return buf;
}

DistributionResult compare_series(const std::vector<std::int64_t>& values, const std::vector<std::int64_t>* reference,
                                  const RealismConfig& config) {
    DistributionResult r;
    r.histogram = build_histogram(values);
    if (reference == nullptr) {
        r.status = CheckStatus::report_only;
        r.detail = "no seed supplied; histogram only";
        return r;
    }
    try {
        const auto d = compare_distributions(values, *reference);
        r.ks_stat = d.ks_stat;
        r.wasserstein_log10 = d.wasserstein_log10;
    } catch (const EmptySampleError&) {
        r.status = CheckStatus::not_assessable;
        r.detail = values.empty() ? "dataset sample is empty" : "seed sample is empty";
        return r;
    }
    if (config.ks_fail_threshold) {
        r.status = *r.ks_stat > *config.ks_fail_threshold ? CheckStatus::fail : CheckStatus::pass;
        r.detail = "KS compared against configured (non-canonical) threshold " + std::to_string(*config.ks_fail_threshold);
    } else {
        r.status = CheckStatus::report_only;
        r.detail = "compared with seed; no pass threshold configured";
    }
    return r;
}

DistributionResult not_assessable_series(std::string why) {
    DistributionResult r;
    r.status = CheckStatus::not_assessable;
    r.detail = std::move(why);
    return r;
}

struct Series {
    std::optional<std::vector<std::int64_t>> log_durations;
    std::optional<std::vector<std::int64_t>> log_gaps;
    std::optional<std::vector<std::int64_t>> session_durations;
    std::optional<std::vector<std::int64_t>> session_gaps;
};

Series series_of(const UsageDataset& dataset, std::int64_t gap_threshold_s) {
    Series s;
    std::vector<std::int64_t> durations;
    durations.reserve(dataset.logs.size());
    for (const auto& log : dataset.logs) {
        durations.push_back(log.duration_s);
    }
    s.log_durations = std::move(durations);
    if (dataset.has_date_only_timestamps()) {
        return s;
    }
    s.log_gaps = log_level_units(dataset).gaps.gaps_s;
    const auto sessions = sessionize(dataset, gap_threshold_s);
    s.session_durations = session_durations(sessions);
    s.session_gaps = session_gaps(sessions).gaps_s;
    return s;
}

DistributionResult compare_optional(const std::optional<std::vector<std::int64_t>>& values,
                                    const std::optional<std::vector<std::int64_t>>* reference,
                                    const RealismConfig& config) {
    if (!values) {
        return not_assessable_series("dataset has date-only timestamps");
    }
    if (reference != nullptr && !*reference) {
        auto r = not_assessable_series("seed has date-only timestamps");
        r.histogram = build_histogram(*values);
        return r;
    }
    return compare_series(*values, reference ? &**reference : nullptr, config);
}

}  // namespace

std::vector<DayUsage> daily_usage(const UsageDataset& dataset) {
    std::map<CivilDay, std::int64_t> per_day;
    for (const auto& log : dataset.logs) {
        per_day[day_of(log.start)] += log.duration_s;
    }
    std::vector<DayUsage> out;
    for (const auto& [day, total] : per_day) {
        out.push_back({day, total});
    }
    return out;
}

double total_usage(const UsageDataset& dataset) {
    std::int64_t total = 0;
    for (const auto& d : daily_usage(dataset)) {
        total += d.total_s;
    }
    return static_cast<double>(total) / 3600.0;
}

double round_hours(std::int64_t seconds) {
    return std::round(static_cast<double>(seconds) / 360.0) / 10.0;
}

CheckResult check_b1(const UsageDataset& dataset) {
    CheckResult result;
    const auto days = daily_usage(dataset);
    if (days.empty()) {
        result.status = CheckStatus::fail;
        result.detail = "no usage recorded";
        return result;
    }
    result.status = CheckStatus::pass;
    for (const auto& d : days) {
        const bool ok = d.total_s >= kMinDailyUsageS && d.total_s <= kMaxDailyUsageS;
        if (!ok) {
            result.status = CheckStatus::fail;
        }
        result.detail += result.detail.empty() ? "" : "; ";
        result.detail += format_date(d.day) + ": " + hours_text(d.total_s) + (ok ? "" : " (outside 1-20 h)");
    }
    return result;
}

std::optional<LongestGap> longest_gap(const UsageDataset& dataset) {
    if (dataset.logs.empty() || dataset.has_date_only_timestamps()) {
        return std::nullopt;
    }
    Timestamp active_until = dataset.logs.front().end();
    LongestGap best{0, active_until, active_until};
    for (std::size_t i = 1; i < dataset.logs.size(); ++i) {
        const auto& log = dataset.logs[i];
        const auto gap = (log.start - active_until).count();
        if (gap > best.gap_s) {
            best = LongestGap{gap, active_until, log.start};
        }
        active_until = std::max(active_until, log.end());
    }
    return best;
}

std::int64_t sleep_window_overlap(Timestamp from, Timestamp to) {
    if (to <= from) {
        return 0;
    }
    std::int64_t best = 0;
    for (auto day = day_of(from) - std::chrono::days{1}; day <= day_of(to); day += std::chrono::days{1}) {
        const auto window_start = at_seconds(day, kSleepWindowStartS);
        const auto window_end = at_seconds(day + std::chrono::days{1}, kSleepWindowEndS);
        const auto overlap = (std::min(to, window_end) - std::max(from, window_start)).count();
        best = std::max(best, overlap);
    }
    return best;
}

std::optional<SleepGapScan> scan_sleep_gaps(const UsageDataset& dataset) {
    if (dataset.logs.empty() || dataset.has_date_only_timestamps()) {
        return std::nullopt;
    }
    SleepGapScan scan;
    Timestamp active_until = dataset.logs.front().end();
    for (std::size_t i = 1; i < dataset.logs.size(); ++i) {
        const auto& log = dataset.logs[i];
        if (log.start > active_until) {
            const auto overlap = sleep_window_overlap(active_until, log.start);
            if (overlap > scan.best_overlap_s) {
                scan.best_overlap_s = overlap;
                scan.best_gap = LongestGap{(log.start - active_until).count(), active_until, log.start};
            }
        }
        active_until = std::max(active_until, log.end());
    }
    return scan;
}

CheckResult check_b2(const UsageDataset& dataset) {
    CheckResult result;
    const auto scan = scan_sleep_gaps(dataset);
    if (!scan) {
        result.status = CheckStatus::not_assessable;
        result.detail = dataset.logs.empty() ? "no usage recorded" : "timestamps lack time of day";
        return result;
    }
    result.status = scan->best_overlap_s >= kSleepGapS ? CheckStatus::pass : CheckStatus::fail;
    if (scan->best_gap) {
        result.detail = "best gap " + format_timestamp(scan->best_gap->gap_start) + " -> " +
                        format_timestamp(scan->best_gap->gap_end) + " covers " + format_hms(scan->best_overlap_s) +
                        " of the 20:00-10:00 window (need 05:00:00)";
    } else {
        result.detail = "no inactivity between logs";
    }
    return result;
}

std::vector<std::string> AppStats::top_k(std::size_t k) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < std::min(k, ranking.size()); ++i) {
        out.push_back(ranking[i].first);
    }
    return out;
}

AppStats app_stats(const UsageDataset& dataset) {
    AppStats stats;
    for (const auto& log : dataset.logs) {
        stats.per_app_time_s[log.app_id] += log.duration_s;
    }
    stats.app_count = stats.per_app_time_s.size();
    stats.ranking = rank(stats.per_app_time_s);
    return stats;
}

double top_k_overlap(const UsageDataset& dataset, const UsageDataset& seed, std::size_t k,
                     const AppNameMatcher& names) {
    auto canonical_top = [&](const UsageDataset& d, const char* which) {
        std::map<std::string, std::int64_t> totals;
        for (const auto& log : d.logs) {
            totals[names.canonical(log.app_id)] += log.duration_s;
        }
        if (k == 0 || k > totals.size()) {
            throw NotAssessable(std::string{which} + " has " + std::to_string(totals.size()) +
                                " distinct apps, fewer than k=" + std::to_string(k));
        }
        const auto ranked = rank(totals);
        std::set<std::string> top;
        for (std::size_t i = 0; i < k; ++i) {
            top.insert(ranked[i].first);
        }
        return top;
    };
    const auto mine = canonical_top(dataset, "dataset");
    const auto theirs = canonical_top(seed, "seed");
    std::size_t shared = 0;
    for (const auto& app : mine) {
        shared += theirs.count(app);
    }
    return static_cast<double>(shared) * 100.0 / static_cast<double>(k);
}

RealismReport evaluate_realism(const UsageDataset& dataset, const UsageDataset* seed, const RealismConfig& config) {
    RealismReport report;

    {
        auto& b1 = report.b1;
        b1.per_day = daily_usage(dataset);
        for (const auto& d : b1.per_day) {
            b1.total_usage_s += d.total_s;
        }
        b1.total_usage_h = round_hours(b1.total_usage_s);
        const auto check = check_b1(dataset);
        b1.status = check.status;
        b1.detail = check.detail;
    }

    {
        auto& b2 = report.b2;
        if (const auto gap = longest_gap(dataset)) {
            b2.longest_gap_s = gap->gap_s;
            b2.gap_start = gap->gap_start;
            b2.gap_end = gap->gap_end;
        }
        if (const auto scan = scan_sleep_gaps(dataset)) {
            b2.sleep_overlap_s = scan->best_overlap_s;
            b2.qualifying_gap_found = scan->best_overlap_s >= kSleepGapS;
        }
        const auto check = check_b2(dataset);
        b2.status = check.status;
        b2.detail = check.detail;
    }

    {
        auto& b3 = report.b3;
        const auto stats = app_stats(dataset);
        b3.app_count = stats.app_count;
        b3.top_k.assign(stats.ranking.begin(),
                        stats.ranking.begin() + static_cast<std::ptrdiff_t>(std::min(config.top_k, stats.ranking.size())));
        b3.status = CheckStatus::report_only;
        if (seed != nullptr) {
            try {
                b3.top_k_overlap_pct = top_k_overlap(dataset, *seed, config.top_k, config.names);
                b3.detail = std::to_string(b3.app_count) + " apps (seed " + std::to_string(app_stats(*seed).app_count) +
                            "); top-" + std::to_string(config.top_k) + " compared with seed";
            } catch (const NotAssessable& e) {
                b3.status = CheckStatus::not_assessable;
                b3.detail = e.what();
            }
        } else {
            b3.detail = std::to_string(b3.app_count) + " apps; no seed supplied";
        }
    }

    const auto mine = series_of(dataset, config.gap_threshold_s);
    std::optional<Series> reference;
    if (seed != nullptr) {
        reference = series_of(*seed, config.gap_threshold_s);
    }
    auto ref = [&](const std::optional<std::vector<std::int64_t>> Series::*member) {
        return reference ? &((*reference).*member) : nullptr;
    };
    report.b4.log_level = compare_optional(mine.log_durations, ref(&Series::log_durations), config);
    report.b4.session_level = compare_optional(mine.session_durations, ref(&Series::session_durations), config);
    report.b5.log_level = compare_optional(mine.log_gaps, ref(&Series::log_gaps), config);
    report.b5.session_level = compare_optional(mine.session_gaps, ref(&Series::session_gaps), config);
    return report;
}

}  // namespace usage_synth
