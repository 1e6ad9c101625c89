#include "usage_synth/sessionizer.hpp"

#include <algorithm>
#include <numeric>

namespace usage_synth {

namespace {

void require_time_of_day(const UsageDataset& dataset) {
    if (dataset.has_date_only_timestamps()) {
        throw SessionizeError("dataset contains date-only timestamps; inter-log gaps are undefined");
    }
}

}  // namespace

std::int64_t Session::active_s() const {
    return std::accumulate(logs.begin(), logs.end(), std::int64_t{0},
                           [](std::int64_t acc, const UsageLog& l) { return acc + l.duration_s; });
}

std::vector<Session> sessionize(const UsageDataset& dataset, std::int64_t gap_threshold_s) {
    require_time_of_day(dataset);
    std::vector<Session> sessions;
    for (const auto& log : dataset.logs) {
        if (!sessions.empty()) {
            auto& current = sessions.back();
            const auto gap = std::max<std::int64_t>(0, (log.start - current.end).count());
            if (gap < gap_threshold_s) {
                current.end = std::max(current.end, log.end());
                current.logs.push_back(log);
                continue;
            }
        }
        sessions.push_back(Session{log.start, log.end(), {log}});
    }
    return sessions;
}

LogUnits log_level_units(const UsageDataset& dataset) {
    require_time_of_day(dataset);
    LogUnits units;
    units.durations_s.reserve(dataset.logs.size());
    for (std::size_t i = 0; i < dataset.logs.size(); ++i) {
        const auto& log = dataset.logs[i];
        units.durations_s.push_back(log.duration_s);
        if (i == 0) {
            continue;
        }
        const auto gap = (log.start - dataset.logs[i - 1].end()).count();
        if (gap < 0) {
            ++units.gaps.clamped;
        }
        units.gaps.gaps_s.push_back(std::max<std::int64_t>(0, gap));
    }
    return units;
}

GapSeries session_gaps(const std::vector<Session>& sessions) {
    GapSeries series;
    for (std::size_t i = 1; i < sessions.size(); ++i) {
        const auto gap = (sessions[i].start - sessions[i - 1].end).count();
        if (gap < 0) {
            ++series.clamped;
        }
        series.gaps_s.push_back(std::max<std::int64_t>(0, gap));
    }
    return series;
}

std::vector<std::int64_t> session_durations(const std::vector<Session>& sessions) {
    std::vector<std::int64_t> out;
    out.reserve(sessions.size());
    for (const auto& s : sessions) {
        out.push_back(s.span_s());
    }
    return out;
}

}  // namespace usage_synth
