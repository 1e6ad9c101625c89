#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace usage_synth::csv {

struct Record {
    std::vector<std::string> fields;
    std::size_t line = 0;  // 1-based line where the record starts
};

// RFC 4180 reader. LF and CRLF line endings; quoted fields may contain
// commas, doubled quotes and line breaks. Blank lines produce no record.
std::vector<Record> read(std::string_view text);

// Splits a single line, ignoring line breaks.
std::vector<std::string> split_line(std::string_view line);

// Quotes the field only when it contains a comma, quote or line break.
std::string escape(std::string_view field);

std::string_view trim(std::string_view s);

}  // namespace usage_synth::csv
