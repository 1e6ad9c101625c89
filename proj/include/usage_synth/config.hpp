#pragma once

#include "usage_synth/baseline.hpp"
#include "usage_synth/sessionizer.hpp"

#include "json.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace usage_synth {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Effective settings for every command. Config file keys use the same
// names; command-line flags override file values.
//
//   gap_threshold_s    integer >= 0            session split threshold (60)
//   k                  integer >= 1            top-k apps compared (5)
//   ks_fail_threshold  number in [0,1] | none  B4/B5 fail threshold (none)
//   alias_file         path | none             extra app-name aliases
//   target_log_count   integer >= 1 | none     baseline logs per day (seed size)
//   rng_seed           integer >= 0            baseline random seed (0)
//   jitter_pct         number in [0,100]       baseline duration jitter (20)
//   quiet_window       H-H | none              baseline hours without starts (1-8)
//   endpoint           URL                     chat-completions base URL
//   model              string                  model name
//   attempts           integer >= 1            runs per prompt (2)
//   timeout_s          integer >= 1            request timeout (300)
//   retries            integer >= 0            transport retries (2)
//   temperature        number | none           sampling temperature (unset)
struct Settings {
    std::int64_t gap_threshold_s = kDefaultGapThresholdS;
    std::size_t k = 5;
    std::optional<double> ks_fail_threshold;
    std::optional<std::string> alias_file;

    std::optional<std::size_t> target_log_count;
    std::uint64_t rng_seed = 0;
    double jitter_pct = 20.0;
    std::optional<QuietWindow> quiet_window = QuietWindow{};

    std::string endpoint;
    std::string model;
    int attempts = 2;
    int timeout_s = 300;
    int retries = 2;
    std::optional<double> temperature;

    // Throws ConfigError on unknown keys or bad values.
    void set(std::string_view key, std::string_view value);
    void validate() const;

    nlohmann::ordered_json to_json() const;
};

// "key = value" lines; '#' comments and blank lines ignored.
std::map<std::string, std::string> parse_key_values(std::string_view text);

Settings load_settings(std::string_view config_text);

}  // namespace usage_synth
