#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace usage_synth {

// Timezone-naive device-local time, seconds precision.
using Timestamp = std::chrono::local_seconds;
using CivilDay = std::chrono::local_days;

struct ParsedTimestamp {
    Timestamp value;
    bool has_time_of_day = true;
};

// Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM[:SS[.fff]]" and the same with a
// space separator. A trailing 'Z' is tolerated and ignored.
std::optional<ParsedTimestamp> parse_timestamp(std::string_view text);

std::optional<CivilDay> parse_date(std::string_view text);

std::string format_timestamp(Timestamp ts);
std::string format_date(CivilDay day);

// "HH:MM:SS"; hours are not wrapped at 24.
std::string format_hms(std::int64_t seconds);

inline CivilDay day_of(Timestamp ts) {
    return std::chrono::floor<std::chrono::days>(ts);
}

inline std::int64_t seconds_into_day(Timestamp ts) {
    return (ts - day_of(ts)).count();
}

inline Timestamp at_seconds(CivilDay day, std::int64_t seconds) {
    return Timestamp{day} + std::chrono::seconds{seconds};
}

}  // namespace usage_synth
