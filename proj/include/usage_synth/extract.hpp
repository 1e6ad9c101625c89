#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace usage_synth {

struct ExtractedCsv {
    std::string csv;  // block lines joined with '\n', trailing newline
    std::vector<std::string> warnings;
};

class ExtractError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Pulls the CSV out of a model reply: a block starts at a line whose fields
// match all four header alias sets and runs over the following non-blank
// lines containing a comma, stopping at code fences. The longest block wins
// (earliest on ties). Throws ExtractError when no header line exists.
ExtractedCsv extract_csv(std::string_view raw_reply);

}  // namespace usage_synth
