#include "usage_synth/model.hpp"

#include "usage_synth/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <utility>

namespace usage_synth {

namespace {

constexpr std::array<std::string_view, 12> kCodeNames = {
    "MissingColumn", "BadTimestamp",   "DateOnlyTimestamp", "NegativeDuration", "NonNumericDuration", "DuplicateId",
    "UnsortedInput", "EmptyDataset",   "AggregatedRows",    "OverlapWarning",   "MalformedRow",       "UnparseableRows",
};

const std::array<std::vector<std::string_view>, 4> kHeaderAliases = {{
    {"id"},
    {"timestamp", "created-at", "created_at"},
    {"app", "app-id", "app_id"},
    {"duration", "time-seconds", "time_seconds"},
}};

constexpr std::array<std::string_view, 4> kRoleNames = {"id", "timestamp", "app", "duration"};

std::string lower(std::string_view s) {
    std::string out{s};
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Integer seconds; accepts decimal point or decimal comma, rounded half away from zero.
std::optional<std::int64_t> parse_duration(std::string_view text) {
    std::string s{csv::trim(text)};
    if (s.empty()) {
        return std::nullopt;
    }
    std::replace(s.begin(), s.end(), ',', '.');
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+') {
        ++first;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        return std::nullopt;
    }
    return static_cast<std::int64_t>(std::llround(value));
}

bool log_less(const UsageLog& a, const UsageLog& b) {
    if (a.start != b.start) {
        return a.start < b.start;
    }
    return id_less(a.id, b.id);
}

}  // namespace

bool is_fatal(FindingCode code) {
    return code == FindingCode::MissingColumn || code == FindingCode::NonNumericDuration ||
           code == FindingCode::EmptyDataset || code == FindingCode::UnparseableRows;
}

bool rejects_row(FindingCode code) {
    return code == FindingCode::BadTimestamp || code == FindingCode::NegativeDuration ||
           code == FindingCode::MalformedRow;
}

bool UsageDataset::has_finding(FindingCode code) const {
    return count_findings(code) > 0;
}

std::size_t UsageDataset::count_findings(FindingCode code) const {
    return static_cast<std::size_t>(
        std::count_if(findings.begin(), findings.end(), [code](const auto& f) { return f.code == code; }));
}

bool UsageDataset::has_date_only_timestamps() const {
    return std::any_of(logs.begin(), logs.end(), [](const UsageLog& l) { return !l.has_time_of_day; });
}

ParseError::ParseError(FindingCode code, std::string detail, std::vector<StructuralFinding> findings)
    : std::runtime_error(std::string{to_string(code)} + ": " + detail), code_(code), findings_(std::move(findings)) {
    findings_.push_back({code, std::nullopt, std::move(detail)});
}

bool id_less(std::string_view a, std::string_view b) {
    const bool na = all_digits(a);
    const bool nb = all_digits(b);
    if (na != nb) {
        return na;
    }
    if (na) {
        const auto strip = [](std::string_view s) {
            const auto p = s.find_first_not_of('0');
            return p == std::string_view::npos ? std::string_view{} : s.substr(p);
        };
        const auto sa = strip(a);
        const auto sb = strip(b);
        if (sa.size() != sb.size()) {
            return sa.size() < sb.size();
        }
        if (sa != sb) {
            return sa < sb;
        }
    }
    return a < b;
}

std::optional<ColumnMap> match_header(const std::vector<std::string>& header) {
    ColumnMap map{};
    for (std::size_t role = 0; role < kHeaderAliases.size(); ++role) {
        bool found = false;
        for (std::size_t col = 0; col < header.size() && !found; ++col) {
            std::string_view name = csv::trim(header[col]);
            if (name.starts_with("\xEF\xBB\xBF")) {
                name.remove_prefix(3);
            }
            const auto key = lower(name);
            for (auto alias : kHeaderAliases[role]) {
                if (key == alias) {
                    map[role] = col;
                    found = true;
                    break;
                }
            }
        }
        if (!found) {
            return std::nullopt;
        }
    }
    return map;
}

UsageDataset parse_dataset(std::string_view csv_text, Provenance provenance) {
    if (csv_text.starts_with("\xEF\xBB\xBF")) {
        csv_text.remove_prefix(3);
    }
    const auto records = csv::read(csv_text);
    if (records.empty()) {
        throw ParseError(FindingCode::EmptyDataset, "no header row");
    }
    const auto columns = match_header(records.front().fields);
    if (!columns) {
        std::string missing;
        for (std::size_t role = 0; role < kRoleNames.size(); ++role) {
            bool present = false;
            for (const auto& h : records.front().fields) {
                const auto key = lower(csv::trim(h));
                for (auto alias : kHeaderAliases[role]) {
                    present = present || key == alias;
                }
            }
            if (!present) {
                missing += missing.empty() ? "" : ", ";
                missing += kRoleNames[role];
            }
        }
        throw ParseError(FindingCode::MissingColumn, "header lacks column(s): " + missing);
    }
    if (records.size() == 1) {
        throw ParseError(FindingCode::EmptyDataset, "header present but no data rows");
    }

    const std::size_t needed = *std::max_element(columns->begin(), columns->end()) + 1;
    std::vector<StructuralFinding> findings;
    std::vector<std::pair<UsageLog, std::size_t>> rows;
    std::size_t rejected = 0;
    const std::size_t data_rows = records.size() - 1;

    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& fields = records[r].fields;
        const std::size_t row = r;
        auto reject = [&](FindingCode code, std::string detail) {
            findings.push_back({code, row, std::move(detail)});
            ++rejected;
        };
        if (fields.size() < needed) {
            reject(FindingCode::MalformedRow,
                   "expected at least " + std::to_string(needed) + " fields, got " + std::to_string(fields.size()));
            continue;
        }
        UsageLog log;
        log.id = std::string{csv::trim(fields[(*columns)[0]])};
        log.app_id = std::string{csv::trim(fields[(*columns)[2]])};
        const auto ts_text = csv::trim(fields[(*columns)[1]]);
        const auto dur_text = fields[(*columns)[3]];
        if (log.id.empty()) {
            reject(FindingCode::MalformedRow, "empty id");
            continue;
        }
        if (log.app_id.empty()) {
            reject(FindingCode::MalformedRow, "empty app");
            continue;
        }
        const auto ts = parse_timestamp(ts_text);
        if (!ts) {
            reject(FindingCode::BadTimestamp, "unparseable timestamp '" + std::string{ts_text} + "'");
            continue;
        }
        const auto duration = parse_duration(dur_text);
        if (!duration) {
            findings.push_back({FindingCode::NonNumericDuration, row,
                                "duration '" + std::string{csv::trim(dur_text)} + "' is not a number"});
            throw ParseError(FindingCode::NonNumericDuration, "non-numeric duration at row " + std::to_string(row),
                             std::move(findings));
        }
        if (*duration < 0) {
            reject(FindingCode::NegativeDuration, "duration " + std::to_string(*duration) + " is negative");
            continue;
        }
        log.start = ts->value;
        log.has_time_of_day = ts->has_time_of_day;
        log.duration_s = *duration;
        if (!log.has_time_of_day) {
            findings.push_back(
                {FindingCode::DateOnlyTimestamp, row, "timestamp '" + std::string{ts_text} + "' has no time of day"});
        }
        rows.emplace_back(std::move(log), row);
    }

    if (rejected * 2 > data_rows) {
        throw ParseError(FindingCode::UnparseableRows,
                         std::to_string(rejected) + " of " + std::to_string(data_rows) + " rows rejected",
                         std::move(findings));
    }

    std::unordered_map<std::string, std::size_t> first_row;
    for (const auto& [log, row] : rows) {
        auto [it, inserted] = first_row.emplace(log.id, row);
        if (!inserted) {
            findings.push_back({FindingCode::DuplicateId, row,
                                "id '" + log.id + "' already used at row " + std::to_string(it->second)});
        }
    }

    const bool sorted = std::is_sorted(rows.begin(), rows.end(),
                                       [](const auto& a, const auto& b) { return log_less(a.first, b.first); });
    if (!sorted) {
        std::stable_sort(rows.begin(), rows.end(),
                         [](const auto& a, const auto& b) { return log_less(a.first, b.first); });
        findings.push_back({FindingCode::UnsortedInput, std::nullopt, "rows were not in chronological order"});
    }

    std::optional<Timestamp> active_until;
    for (const auto& [log, row] : rows) {
        if (!log.has_time_of_day) {
            continue;
        }
        if (active_until && log.start < *active_until) {
            findings.push_back({FindingCode::OverlapWarning, row,
                                "starts " + std::to_string((*active_until - log.start).count()) +
                                    " s before the previous activity ends"});
        }
        active_until = active_until ? std::max(*active_until, log.end()) : log.end();
    }

    UsageDataset dataset;
    dataset.provenance = std::move(provenance);
    dataset.findings = std::move(findings);
    dataset.logs.reserve(rows.size());
    for (auto& [log, row] : rows) {
        dataset.logs.push_back(std::move(log));
    }
    return dataset;
}

std::string write_dataset(const UsageDataset& dataset) {
    std::vector<std::size_t> order(dataset.logs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return log_less(dataset.logs[a], dataset.logs[b]); });

    std::string out{kCanonicalHeader};
    out.push_back('\n');
    for (auto i : order) {
        const auto& log = dataset.logs[i];
        out += csv::escape(log.id);
        out.push_back(',');
        out += log.has_time_of_day ? format_timestamp(log.start) : format_date(day_of(log.start));
        out.push_back(',');
        out += csv::escape(log.app_id);
        out.push_back(',');
        out += std::to_string(log.duration_s);
        out.push_back('\n');
    }
    return out;
}

UsageDataset normalize(UsageDataset dataset) {
    if (!std::is_sorted(dataset.logs.begin(), dataset.logs.end(), log_less)) {
        std::stable_sort(dataset.logs.begin(), dataset.logs.end(), log_less);
        dataset.findings.push_back({FindingCode::UnsortedInput, std::nullopt, "rows were not in chronological order"});
    }
    return dataset;
}

std::string_view to_string(FindingCode code) {
    return kCodeNames[static_cast<std::size_t>(code)];
}

std::string_view to_string(Origin origin) {
    switch (origin) {
        case Origin::real: return "real";
        case Origin::synthetic: return "synthetic";
        case Origin::baseline: return "baseline";
    }
    return "real";
}

std::string_view to_string(PromptLabel label) {
    constexpr std::array<std::string_view, 4> names = {"P1", "P2", "P3", "P4"};
    return names[static_cast<std::size_t>(label)];
}

std::optional<FindingCode> finding_code_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kCodeNames.size(); ++i) {
        if (kCodeNames[i] == s) {
            return static_cast<FindingCode>(i);
        }
    }
    return std::nullopt;
}

std::optional<Origin> origin_from_string(std::string_view s) {
    for (auto o : {Origin::real, Origin::synthetic, Origin::baseline}) {
        if (to_string(o) == s) {
            return o;
        }
    }
    return std::nullopt;
}

std::optional<PromptLabel> prompt_label_from_string(std::string_view s) {
    const auto key = lower(s);
    for (auto l : {PromptLabel::P1, PromptLabel::P2, PromptLabel::P3, PromptLabel::P4}) {
        if (lower(to_string(l)) == key) {
            return l;
        }
    }
    return std::nullopt;
}

}  // namespace usage_synth
