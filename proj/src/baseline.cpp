#include "usage_synth/baseline.hpp"

#include "usage_synth/compliance.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace usage_synth {

bool QuietWindow::contains(int hour) const {
    if (start_hour <= end_hour) {
        return hour >= start_hour && hour < end_hour;
    }
    return hour >= start_hour || hour < end_hour;
}

void GenConfig::validate() const {
    if (target_log_count && *target_log_count == 0) {
        throw std::invalid_argument("target_log_count must be positive");
    }
    if (!(duration_jitter_pct >= 0.0 && duration_jitter_pct <= 100.0)) {
        throw std::invalid_argument("duration_jitter_pct must lie in [0, 100]");
    }
    if (quiet_window) {
        const auto& q = *quiet_window;
        if (q.start_hour < 0 || q.start_hour > 23 || q.end_hour < 0 || q.end_hour > 24 || q.start_hour == q.end_hour) {
            throw std::invalid_argument("quiet_window hours must be distinct and within 0-24");
        }
    }
}

SeedProfile profile_seed(const UsageDataset& seed) {
    if (seed.logs.size() < kMinSeedLogs) {
        throw InvalidSeed("seed has " + std::to_string(seed.logs.size()) + " logs; at least " +
                          std::to_string(kMinSeedLogs) + " are required");
    }
    if (check_s1(seed).status != CheckStatus::pass || seed.has_date_only_timestamps()) {
        throw InvalidSeed("seed fails structural check S1");
    }
    SeedProfile p;
    for (const auto& log : seed.logs) {
        const auto hour = static_cast<std::size_t>(seconds_into_day(log.start) / 3600);
        p.hour_intensity[hour] += 1.0;
        p.app_freq_by_hour[hour][log.app_id] += 1.0;
        p.per_app_durations_s[log.app_id].push_back(log.duration_s);
    }
    p.total_logs = seed.logs.size();
    return p;
}

namespace {

std::mt19937_64 stream_for(std::uint64_t seed_value, CivilDay day) {
    const auto d = static_cast<std::uint64_t>(day.time_since_epoch().count());
    std::seed_seq seq{static_cast<std::uint32_t>(seed_value), static_cast<std::uint32_t>(seed_value >> 32),
                      static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(d >> 32)};
    return std::mt19937_64{seq};
}

}  // namespace

UsageDataset generate_day(const SeedProfile& profile, CivilDay day, const GenConfig& config) {
    config.validate();
    std::array<double, 24> weights = profile.hour_intensity;
    for (int h = 0; h < 24; ++h) {
        if (config.quiet_window && config.quiet_window->contains(h)) {
            weights[static_cast<std::size_t>(h)] = 0.0;
        }
    }
    if (std::all_of(weights.begin(), weights.end(), [](double w) { return w <= 0.0; })) {
        throw std::invalid_argument("seed has no activity outside the quiet window");
    }

    auto rng = stream_for(config.seed_value, day);
    std::discrete_distribution<int> pick_hour(weights.begin(), weights.end());
    std::uniform_int_distribution<std::int64_t> pick_second(0, 3599);
    const double jitter = config.duration_jitter_pct / 100.0;
    std::uniform_real_distribution<double> pick_factor(1.0 - jitter, 1.0 + jitter);

    // Per-hour app tables flattened once so draws do not depend on map lookups.
    std::array<std::vector<const std::string*>, 24> hour_apps;
    std::array<std::discrete_distribution<std::size_t>, 24> pick_app;
    for (std::size_t h = 0; h < 24; ++h) {
        std::vector<double> w;
        for (const auto& [app, weight] : profile.app_freq_by_hour[h]) {
            hour_apps[h].push_back(&app);
            w.push_back(weight);
        }
        if (!w.empty()) {
            pick_app[h] = std::discrete_distribution<std::size_t>(w.begin(), w.end());
        }
    }

    const std::size_t target = config.target_log_count.value_or(profile.total_logs);
    struct Draw {
        std::int64_t offset_s;
        const std::string* app;
        std::int64_t duration_s;
    };
    std::vector<Draw> draws;
    draws.reserve(target);
    for (std::size_t i = 0; i < target; ++i) {
        const auto hour = static_cast<std::size_t>(pick_hour(rng));
        const auto offset = static_cast<std::int64_t>(hour) * 3600 + pick_second(rng);
        const auto* app = hour_apps[hour][pick_app[hour](rng)];
        const auto& sample = profile.per_app_durations_s.at(*app);
        std::uniform_int_distribution<std::size_t> pick_sample(0, sample.size() - 1);
        const auto base = static_cast<double>(sample[pick_sample(rng)]);
        const auto duration = std::max<std::int64_t>(0, std::llround(base * pick_factor(rng)));
        draws.push_back({offset, app, duration});
    }
    std::stable_sort(draws.begin(), draws.end(), [](const Draw& a, const Draw& b) { return a.offset_s < b.offset_s; });

    UsageDataset out;
    out.provenance.origin = Origin::baseline;
    out.provenance.source = "baseline day " + format_date(day) + " seed_value=" + std::to_string(config.seed_value);
    std::int64_t active_until = 0;
    for (const auto& d : draws) {
        std::int64_t start = std::max(d.offset_s, active_until);
        if (config.quiet_window && config.quiet_window->contains(static_cast<int>(start / 3600 % 24))) {
            const auto& q = *config.quiet_window;
            const bool wrapped_tail = q.start_hour > q.end_hour && start / 3600 >= q.start_hour;
            start = wrapped_tail ? 86400 : static_cast<std::int64_t>(q.end_hour) * 3600;
        }
        if (start >= 86400) {
            continue;
        }
        UsageLog log;
        log.id = std::to_string(out.logs.size() + 1);
        log.start = at_seconds(day, start);
        log.app_id = *d.app;
        log.duration_s = d.duration_s;
        active_until = start + d.duration_s;
        out.logs.push_back(std::move(log));
    }
    return out;
}

std::vector<UsageDataset> generate_batch(const SeedProfile& profile, std::span<const CivilDay> days,
                                         const GenConfig& config) {
    if (days.empty()) {
        throw std::invalid_argument("generate_batch needs at least one day");
    }
    std::vector<UsageDataset> out;
    out.reserve(days.size());
    for (const auto day : days) {
        out.push_back(generate_day(profile, day, config));
    }
    return out;
}

}  // namespace usage_synth
