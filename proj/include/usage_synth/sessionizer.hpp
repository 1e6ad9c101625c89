#pragma once

#include "usage_synth/model.hpp"

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace usage_synth {

inline constexpr std::int64_t kDefaultGapThresholdS = 60;
inline constexpr std::int64_t kUnboundedGap = std::numeric_limits<std::int64_t>::max();

struct Session {
    Timestamp start;
    Timestamp end;  // latest end among member logs
    std::vector<UsageLog> logs;

    std::int64_t active_s() const;
    std::int64_t span_s() const { return (end - start).count(); }
};

struct GapSeries {
    std::vector<std::int64_t> gaps_s;
    // Number of negative gaps (overlaps) clamped to zero.
    std::size_t clamped = 0;
};

struct LogUnits {
    std::vector<std::int64_t> durations_s;
    GapSeries gaps;
};

class SessionizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Consecutive logs share a session iff the inactivity between the session's
// latest activity end and the next start is strictly below the threshold.
// Throws SessionizeError if any log lacks a time of day.
std::vector<Session> sessionize(const UsageDataset& dataset, std::int64_t gap_threshold_s = kDefaultGapThresholdS);

// Each log is its own unit; gap = next.start - (prev.start + prev.duration),
// clamped at zero.
LogUnits log_level_units(const UsageDataset& dataset);

GapSeries session_gaps(const std::vector<Session>& sessions);

std::vector<std::int64_t> session_durations(const std::vector<Session>& sessions);

}  // namespace usage_synth
