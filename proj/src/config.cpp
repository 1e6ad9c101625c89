#include "usage_synth/config.hpp"

#include "usage_synth/csv.hpp"

#include <charconv>
#include <cmath>

namespace usage_synth {

namespace {

bool is_none(std::string_view v) {
    return v == "none" || v == "null" || v.empty();
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view v) {
    Int out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError(std::string{key} + ": expected an integer, got '" + std::string{v} + "'");
    }
    return out;
}

double parse_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigError(std::string{key} + ": expected a number, got '" + std::string{v} + "'");
    }
    return out;
}

QuietWindow parse_window(std::string_view v) {
    const auto dash = v.find('-');
    if (dash == std::string_view::npos) {
        throw ConfigError("quiet_window: expected START-END hours, got '" + std::string{v} + "'");
    }
    return QuietWindow{parse_int<int>("quiet_window", csv::trim(v.substr(0, dash))),
                       parse_int<int>("quiet_window", csv::trim(v.substr(dash + 1)))};
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::string_view text) {
    std::map<std::string, std::string> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = csv::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos || csv::trim(line.substr(0, eq)).empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        out[std::string{csv::trim(line.substr(0, eq))}] = std::string{csv::trim(line.substr(eq + 1))};
    }
    return out;
}

void Settings::set(std::string_view key, std::string_view raw) {
    const auto v = csv::trim(raw);
    if (key == "gap_threshold_s") {
        gap_threshold_s = parse_int<std::int64_t>(key, v);
    } else if (key == "k") {
        k = parse_int<std::size_t>(key, v);
    } else if (key == "ks_fail_threshold") {
        ks_fail_threshold = is_none(v) ? std::nullopt : std::optional<double>{parse_double(key, v)};
    } else if (key == "alias_file") {
        alias_file = is_none(v) ? std::nullopt : std::optional<std::string>{std::string{v}};
    } else if (key == "target_log_count") {
        target_log_count = is_none(v) ? std::nullopt : std::optional<std::size_t>{parse_int<std::size_t>(key, v)};
    } else if (key == "rng_seed") {
        rng_seed = parse_int<std::uint64_t>(key, v);
    } else if (key == "jitter_pct") {
        jitter_pct = parse_double(key, v);
    } else if (key == "quiet_window") {
        quiet_window = is_none(v) ? std::nullopt : std::optional<QuietWindow>{parse_window(v)};
    } else if (key == "endpoint") {
        endpoint = std::string{v};
    } else if (key == "model") {
        model = std::string{v};
    } else if (key == "attempts") {
        attempts = parse_int<int>(key, v);
    } else if (key == "timeout_s") {
        timeout_s = parse_int<int>(key, v);
    } else if (key == "retries") {
        retries = parse_int<int>(key, v);
    } else if (key == "temperature") {
        temperature = is_none(v) ? std::nullopt : std::optional<double>{parse_double(key, v)};
    } else {
        throw ConfigError("unknown config key '" + std::string{key} + "'");
    }
}

void Settings::validate() const {
    if (gap_threshold_s < 0) {
        throw ConfigError("gap_threshold_s must be >= 0");
    }
    if (k < 1) {
        throw ConfigError("k must be >= 1");
    }
    if (ks_fail_threshold && (*ks_fail_threshold < 0.0 || *ks_fail_threshold > 1.0)) {
        throw ConfigError("ks_fail_threshold must lie in [0, 1]");
    }
    if (attempts < 1) {
        throw ConfigError("attempts must be >= 1");
    }
    if (timeout_s < 1) {
        throw ConfigError("timeout_s must be >= 1");
    }
    if (retries < 0) {
        throw ConfigError("retries must be >= 0");
    }
    GenConfig gen;
    gen.target_log_count = target_log_count;
    gen.duration_jitter_pct = jitter_pct;
    gen.quiet_window = quiet_window;
    try {
        gen.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

nlohmann::ordered_json Settings::to_json() const {
    nlohmann::ordered_json j;
    auto opt = [](const auto& o) { return o ? nlohmann::ordered_json(*o) : nlohmann::ordered_json(nullptr); };
    j["gap_threshold_s"] = gap_threshold_s;
    j["k"] = k;
    j["ks_fail_threshold"] = opt(ks_fail_threshold);
    j["ks_fail_threshold_canonical"] = false;
    j["alias_file"] = opt(alias_file);
    j["target_log_count"] = opt(target_log_count);
    j["rng_seed"] = rng_seed;
    j["jitter_pct"] = jitter_pct;
    j["quiet_window"] = quiet_window ? nlohmann::ordered_json(std::to_string(quiet_window->start_hour) + "-" +
                                                             std::to_string(quiet_window->end_hour))
                                     : nlohmann::ordered_json(nullptr);
    j["endpoint"] = endpoint;
    j["model"] = model;
    j["attempts"] = attempts;
    j["timeout_s"] = timeout_s;
    j["retries"] = retries;
    j["temperature"] = opt(temperature);
    return j;
}

Settings load_settings(std::string_view config_text) {
    Settings s;
    for (const auto& [key, value] : parse_key_values(config_text)) {
        s.set(key, value);
    }
    return s;
}

}  // namespace usage_synth
