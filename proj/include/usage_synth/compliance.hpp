#pragma once

#include "usage_synth/model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace usage_synth {

enum class CheckStatus { pass, fail, not_assessable, report_only };

std::string_view to_string(CheckStatus status);
std::optional<CheckStatus> check_status_from_string(std::string_view s);

struct CheckResult {
    CheckStatus status = CheckStatus::not_assessable;
    std::vector<StructuralFinding> findings;
    std::string detail;

    bool operator==(const CheckResult&) const = default;
};

struct ComplianceReport {
    CheckResult s1;
    CheckResult s2;
    CheckResult s3;

    bool operator==(const ComplianceReport&) const = default;
};

// Correct variables and formatting.
CheckResult check_s1(const UsageDataset& dataset);

// S1 result for input that could not be parsed at all.
CheckResult check_s1_fatal(const ParseError& error);

// Raw per-event rows rather than an aggregated summary. Automated
// approximation: fails only when every aggregation signal fires together.
CheckResult check_s2(const UsageDataset& dataset);

// Dataset delivered in a single model reply; needs provenance.reply_count.
CheckResult check_s3(const UsageDataset& dataset);

ComplianceReport check_compliance(const UsageDataset& dataset);

}  // namespace usage_synth
