#pragma once

#include "usage_synth/timestamp.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace usage_synth {

// One app being in active (foreground) use.
struct UsageLog {
    std::string id;
    Timestamp start;
    std::string app_id;
    std::int64_t duration_s = 0;
    // false when the source only carried a date; start is then midnight.
    bool has_time_of_day = true;

    Timestamp end() const { return start + std::chrono::seconds{duration_s}; }

    bool operator==(const UsageLog&) const = default;
};

enum class Origin { real, synthetic, baseline };

enum class PromptLabel { P1, P2, P3, P4 };

struct Provenance {
    Origin origin = Origin::real;
    std::optional<PromptLabel> prompt_label;
    std::optional<int> attempt;
    std::optional<int> reply_count;
    // Free-form origin description, e.g. a generated day or a run directory.
    std::string source;

    bool operator==(const Provenance&) const = default;
};

enum class FindingCode {
    MissingColumn,
    BadTimestamp,
    DateOnlyTimestamp,
    NegativeDuration,
    NonNumericDuration,
    DuplicateId,
    UnsortedInput,
    EmptyDataset,
    AggregatedRows,
    OverlapWarning,
    MalformedRow,     // wrong field count, empty id or empty app
    UnparseableRows,  // more than half of the data rows were rejected
};

// Fatal codes abort parsing: no dataset is produced.
bool is_fatal(FindingCode code);

// Codes whose row is rejected (not turned into a log) but parsing continues.
bool rejects_row(FindingCode code);

struct StructuralFinding {
    FindingCode code;
    std::optional<std::size_t> row;  // 1-based data row, header excluded
    std::string detail;

    bool operator==(const StructuralFinding&) const = default;
};

struct UsageDataset {
    std::vector<UsageLog> logs;
    Provenance provenance;
    std::vector<StructuralFinding> findings;

    bool has_finding(FindingCode code) const;
    std::size_t count_findings(FindingCode code) const;
    bool has_date_only_timestamps() const;

    bool operator==(const UsageDataset&) const = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(FindingCode code, std::string detail, std::vector<StructuralFinding> findings = {});

    FindingCode code() const { return code_; }
    const std::vector<StructuralFinding>& findings() const { return findings_; }

private:
    FindingCode code_;
    std::vector<StructuralFinding> findings_;
};

enum class Column { id, start, app, duration };

// Column index per role; nullopt when the header lacks one of the roles.
using ColumnMap = std::array<std::size_t, 4>;
std::optional<ColumnMap> match_header(const std::vector<std::string>& header);

// Throws ParseError on fatal problems; recoverable problems are recorded in
// the returned dataset's findings.
UsageDataset parse_dataset(std::string_view csv_text, Provenance provenance = {});

inline constexpr std::string_view kCanonicalHeader = "id,created-at,app-id,time-seconds";

std::string write_dataset(const UsageDataset& dataset);

// Stable sort by (start, id). Appends UnsortedInput when the order changed.
UsageDataset normalize(UsageDataset dataset);

// Strict weak order on ids: all-digit ids compare numerically and sort
// before other ids, which compare bytewise.
bool id_less(std::string_view a, std::string_view b);

std::string_view to_string(FindingCode code);
std::string_view to_string(Origin origin);
std::string_view to_string(PromptLabel label);
std::optional<FindingCode> finding_code_from_string(std::string_view s);
std::optional<Origin> origin_from_string(std::string_view s);
std::optional<PromptLabel> prompt_label_from_string(std::string_view s);

}  // namespace usage_synth
