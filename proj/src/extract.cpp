#include "usage_synth/extract.hpp"

#include "usage_synth/csv.hpp"
#include "usage_synth/model.hpp"

namespace usage_synth {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
        if (nl == std::string_view::npos) {
            break;
        }
        text.remove_prefix(nl + 1);
    }
    return lines;
}

bool is_fence(std::string_view line) {
    return csv::trim(line).starts_with("```");
}

bool is_header(std::string_view line) {
    if (is_fence(line) || line.find(',') == std::string_view::npos) {
        return false;
    }
    return match_header(csv::split_line(line)).has_value();
}

}  // namespace

ExtractedCsv extract_csv(std::string_view raw_reply) {
    if (raw_reply.starts_with("\xEF\xBB\xBF")) {
        raw_reply.remove_prefix(3);
    }
    const auto lines = split_lines(raw_reply);
    struct Block {
        std::size_t first;
        std::size_t count;
    };
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < lines.size();) {
        if (!is_header(lines[i])) {
            ++i;
            continue;
        }
        std::size_t end = i + 1;
        while (end < lines.size() && !is_fence(lines[end]) && !csv::trim(lines[end]).empty() &&
               lines[end].find(',') != std::string_view::npos && !is_header(lines[end])) {
            ++end;
        }
        blocks.push_back({i, end - i});
        i = end;
    }
    if (blocks.empty()) {
        throw ExtractError("reply contains no CSV header line with id, timestamp, app and duration columns");
    }

    ExtractedCsv out;
    const Block* best = &blocks.front();
    for (const auto& b : blocks) {
        if (b.count > best->count) {
            best = &b;
        }
    }
    if (blocks.size() > 1) {
        out.warnings.push_back("reply contains " + std::to_string(blocks.size()) +
                               " CSV blocks; using the longest (lines " + std::to_string(best->first + 1) + "-" +
                               std::to_string(best->first + best->count) + ")");
    }
    for (std::size_t i = best->first; i < best->first + best->count; ++i) {
        out.csv += lines[i];
        out.csv.push_back('\n');
    }
    return out;
}

}  // namespace usage_synth
