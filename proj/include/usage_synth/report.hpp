#pragma once

#include "usage_synth/compliance.hpp"
#include "usage_synth/model.hpp"
#include "usage_synth/realism.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace usage_synth {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct FullReport {
    std::string tool_version{kToolVersion};
    std::string dataset_ref;
    std::optional<std::string> seed_ref;
    Provenance provenance;
    // Set when the dataset could not be parsed; realism is then absent.
    std::optional<std::string> fatal_error;
    ComplianceReport compliance;
    std::optional<RealismReport> realism;
    nlohmann::ordered_json config_echo = nlohmann::ordered_json::object();

    bool operator==(const FullReport&) const = default;
};

FullReport evaluate_dataset(const UsageDataset& dataset, const UsageDataset* seed, const RealismConfig& config);

// Report for input that failed fatally at parse time.
FullReport fatal_report(const ParseError& error);

// Fixed key order; the version field is always present.
nlohmann::ordered_json report_to_json(const FullReport& report);

// Inverse of report_to_json. Throws nlohmann::json::exception or
// std::runtime_error on schema mismatch.
FullReport report_from_json(const nlohmann::ordered_json& j);

// True when any assessable hard criterion (S1, S2, B1, B2) failed.
bool has_hard_failure(const FullReport& report);

// Criterion / status / key number table. Numbers are formatted exactly as
// they appear in the JSON report.
std::string summary_table(const FullReport& report);

}  // namespace usage_synth
