#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace usage_synth {

// Throws std::runtime_error when the file cannot be read.
std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string utc_now_iso8601();

}  // namespace usage_synth
