#pragma once

#include "usage_synth/model.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace usage_synth {

inline constexpr std::size_t kMinSeedLogs = 10;

// Empirical tables of one seed dataset.
struct SeedProfile {
    std::array<double, 24> hour_intensity{};  // log starts per hour of day
    std::map<std::string, std::vector<std::int64_t>> per_app_durations_s;
    std::array<std::map<std::string, double>, 24> app_freq_by_hour;
    std::size_t total_logs = 0;

    bool operator==(const SeedProfile&) const = default;
};

// Hours [start_hour, end_hour) with no log starts; may wrap past midnight.
struct QuietWindow {
    int start_hour = 1;
    int end_hour = 8;

    bool contains(int hour) const;
    bool operator==(const QuietWindow&) const = default;
};

struct GenConfig {
    std::optional<std::size_t> target_log_count;  // defaults to the seed's log count
    std::uint64_t seed_value = 0;
    double duration_jitter_pct = 20.0;
    std::optional<QuietWindow> quiet_window = QuietWindow{};

    // Throws std::invalid_argument.
    void validate() const;
};

class InvalidSeed : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Throws InvalidSeed when the seed has fewer than kMinSeedLogs logs or fails S1.
SeedProfile profile_seed(const UsageDataset& seed);

// One synthetic day resampled from the profile. Logs never overlap: a start
// that falls inside the previous activity is pushed to its end, and a log
// pushed past the end of the day is dropped, so the log count can come out
// slightly below the target. Deterministic in (profile, day, config).
UsageDataset generate_day(const SeedProfile& profile, CivilDay day, const GenConfig& config);

// Each day draws from its own stream derived from (seed_value, day).
std::vector<UsageDataset> generate_batch(const SeedProfile& profile, std::span<const CivilDay> days,
                                         const GenConfig& config);

}  // namespace usage_synth
