#pragma once

#include "usage_synth/app_names.hpp"
#include "usage_synth/compliance.hpp"
#include "usage_synth/distribution.hpp"
#include "usage_synth/model.hpp"
#include "usage_synth/sessionizer.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace usage_synth {

// Daily usage must fall in [1 h, 20 h], bounds inclusive.
inline constexpr std::int64_t kMinDailyUsageS = 3600;
inline constexpr std::int64_t kMaxDailyUsageS = 20 * 3600;

// A non-usage period of at least 5 h inside the 20:00-10:00 sleep window.
inline constexpr std::int64_t kSleepGapS = 5 * 3600;
inline constexpr std::int64_t kSleepWindowStartS = 20 * 3600;
inline constexpr std::int64_t kSleepWindowEndS = 10 * 3600;  // next day

inline constexpr std::size_t kDefaultTopK = 5;

struct RealismConfig {
    std::int64_t gap_threshold_s = kDefaultGapThresholdS;
    std::size_t top_k = kDefaultTopK;
    // Not canonical; B4/B5 stay report_only unless set.
    std::optional<double> ks_fail_threshold;
    AppNameMatcher names;
};

struct DayUsage {
    CivilDay day;
    std::int64_t total_s = 0;

    bool operator==(const DayUsage&) const = default;
};

// Usage attributed to the calendar day each log starts on.
std::vector<DayUsage> daily_usage(const UsageDataset& dataset);

// Total hours over all days, unrounded.
double total_usage(const UsageDataset& dataset);

// One decimal, as reported.
double round_hours(std::int64_t seconds);

CheckResult check_b1(const UsageDataset& dataset);

struct LongestGap {
    std::int64_t gap_s = 0;
    Timestamp gap_start;
    Timestamp gap_end;
};

// Longest stretch between the end of all activity so far and the next log
// start. nullopt when the dataset is empty or has date-only timestamps.
std::optional<LongestGap> longest_gap(const UsageDataset& dataset);

// Longest intersection of [from, to) with any single 20:00-10:00 window.
std::int64_t sleep_window_overlap(Timestamp from, Timestamp to);

struct SleepGapScan {
    std::int64_t best_overlap_s = 0;
    std::optional<LongestGap> best_gap;
};

// Gap with the largest sleep-window intersection; nullopt on date-only data.
std::optional<SleepGapScan> scan_sleep_gaps(const UsageDataset& dataset);

CheckResult check_b2(const UsageDataset& dataset);

struct AppStats {
    std::size_t app_count = 0;
    std::map<std::string, std::int64_t> per_app_time_s;
    // All apps by total time descending, ties by name ascending.
    std::vector<std::pair<std::string, std::int64_t>> ranking;

    std::vector<std::string> top_k(std::size_t k) const;
};

// App names are compared exactly after trimming.
AppStats app_stats(const UsageDataset& dataset);

class NotAssessable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Percentage of the dataset's top-k apps (by time) that are also among the
// seed's top-k, order ignored, names compared through the matcher. Throws
// NotAssessable if k exceeds either dataset's app count.
double top_k_overlap(const UsageDataset& dataset, const UsageDataset& seed, std::size_t k = kDefaultTopK,
                     const AppNameMatcher& names = AppNameMatcher{});

struct B1Result {
    std::int64_t total_usage_s = 0;
    double total_usage_h = 0.0;
    std::vector<DayUsage> per_day;
    CheckStatus status = CheckStatus::not_assessable;
    std::string detail;

    bool operator==(const B1Result&) const = default;
};

struct B2Result {
    std::optional<std::int64_t> longest_gap_s;
    std::optional<Timestamp> gap_start;
    std::optional<Timestamp> gap_end;
    std::int64_t sleep_overlap_s = 0;
    bool qualifying_gap_found = false;
    CheckStatus status = CheckStatus::not_assessable;
    std::string detail;

    bool operator==(const B2Result&) const = default;
};

struct B3Result {
    std::size_t app_count = 0;
    std::vector<std::pair<std::string, std::int64_t>> top_k;
    std::optional<double> top_k_overlap_pct;
    CheckStatus status = CheckStatus::report_only;
    std::string detail;

    bool operator==(const B3Result&) const = default;
};

struct DistributionResult {
    Histogram histogram;
    std::optional<double> ks_stat;
    std::optional<double> wasserstein_log10;
    CheckStatus status = CheckStatus::not_assessable;
    std::string detail;

    bool operator==(const DistributionResult&) const = default;
};

// One distribution under both grouping methods.
struct GroupedDistributions {
    DistributionResult log_level;
    DistributionResult session_level;

    bool operator==(const GroupedDistributions&) const = default;
};

struct RealismReport {
    B1Result b1;
    B2Result b2;
    B3Result b3;
    GroupedDistributions b4;  // usage (session) lengths
    GroupedDistributions b5;  // non-usage intervals

    bool operator==(const RealismReport&) const = default;
};

// Metrics that cannot be computed degrade to not_assessable.
RealismReport evaluate_realism(const UsageDataset& dataset, const UsageDataset* seed,
                               const RealismConfig& config = {});

}  // namespace usage_synth
