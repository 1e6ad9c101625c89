#include "usage_synth/csv.hpp"

namespace usage_synth::csv {

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n\f\v";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

std::vector<Record> read(std::string_view text) {
    std::vector<Record> records;
    Record current;
    std::string field;
    bool in_quotes = false;
    bool record_has_content = false;
    std::size_t line = 1;
    current.line = 1;

    auto end_record = [&] {
        if (record_has_content || !current.fields.empty()) {
            current.fields.push_back(std::move(field));
            records.push_back(std::move(current));
        }
        current = Record{};
        field.clear();
        record_has_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') {
                    ++line;
                }
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                record_has_content = true;
                break;
            case ',':
                current.fields.push_back(std::move(field));
                field.clear();
                record_has_content = true;
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') {
                    break;
                }
                [[fallthrough]];
            case '\n':
                end_record();
                ++line;
                current.line = line;
                break;
            default:
                field.push_back(c);
                if (c != ' ' && c != '\t') {
                    record_has_content = true;
                }
                break;
        }
    }
    end_record();
    return records;
}

std::vector<std::string> split_line(std::string_view line) {
    auto records = read(line);
    if (records.empty()) {
        return {};
    }
    return std::move(records.front().fields);
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string{field};
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace usage_synth::csv
