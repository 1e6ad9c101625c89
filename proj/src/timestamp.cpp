#include "usage_synth/timestamp.hpp"

#include <charconv>
#include <cstdio>

namespace usage_synth {

namespace {

bool read_fixed(std::string_view text, std::size_t pos, std::size_t width, int& out) {
    if (pos + width > text.size()) {
        return false;
    }
    for (std::size_t i = pos; i < pos + width; ++i) {
        if (text[i] < '0' || text[i] > '9') {
            return false;
        }
    }
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + width, out);
    return ec == std::errc{} && ptr == text.data() + pos + width;
}

std::optional<CivilDay> read_date(std::string_view text) {
    int y = 0, m = 0, d = 0;
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') {
        return std::nullopt;
    }
    if (!read_fixed(text, 0, 4, y) || !read_fixed(text, 5, 2, m) || !read_fixed(text, 8, 2, d)) {
        return std::nullopt;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    return CivilDay{ymd};
}

}  // namespace

std::optional<CivilDay> parse_date(std::string_view text) {
    if (text.size() != 10) {
        return std::nullopt;
    }
    return read_date(text);
}

std::optional<ParsedTimestamp> parse_timestamp(std::string_view text) {
    if (!text.empty() && (text.back() == 'Z' || text.back() == 'z')) {
        text.remove_suffix(1);
    }
    auto day = read_date(text);
    if (!day) {
        return std::nullopt;
    }
    if (text.size() == 10) {
        return ParsedTimestamp{Timestamp{*day}, false};
    }
    if (text[10] != 'T' && text[10] != 't' && text[10] != ' ') {
        return std::nullopt;
    }
    int hh = 0, mm = 0, ss = 0;
    if (!read_fixed(text, 11, 2, hh) || text.size() < 16 || text[13] != ':' || !read_fixed(text, 14, 2, mm)) {
        return std::nullopt;
    }
    std::size_t pos = 16;
    if (pos < text.size()) {
        if (text[pos] != ':' || !read_fixed(text, pos + 1, 2, ss)) {
            return std::nullopt;
        }
        pos += 3;
        if (pos < text.size()) {
            // fractional seconds are truncated
            if (text[pos] != '.' || pos + 1 == text.size()) {
                return std::nullopt;
            }
            for (std::size_t i = pos + 1; i < text.size(); ++i) {
                if (text[i] < '0' || text[i] > '9') {
                    return std::nullopt;
                }
            }
        }
    }
    if (hh > 23 || mm > 59 || ss > 59) {
        return std::nullopt;
    }
    return ParsedTimestamp{at_seconds(*day, hh * 3600 + mm * 60 + ss), true};
}

std::string format_date(CivilDay day) {
    const std::chrono::year_month_day ymd{day};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string format_timestamp(Timestamp ts) {
    const auto secs = seconds_into_day(ts);
    char buf[16];
    std::snprintf(buf, sizeof buf, "T%02d:%02d:%02d", static_cast<int>(secs / 3600),
                  static_cast<int>(secs / 60 % 60), static_cast<int>(secs % 60));
    return format_date(day_of(ts)) + buf;
}

std::string format_hms(std::int64_t seconds) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld", static_cast<long long>(seconds / 3600),
                  static_cast<long long>(seconds / 60 % 60), static_cast<long long>(seconds % 60));
    return buf;
}

}  // namespace usage_synth
