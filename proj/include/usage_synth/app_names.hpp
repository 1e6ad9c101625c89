#pragma once

#include <map>
#include <string>
#include <string_view>

namespace usage_synth {

// Simple case folding for ASCII, Latin-1, Latin Extended-A, Greek and
// Cyrillic. Other code points pass through unchanged; invalid UTF-8 bytes
// are kept as-is.
std::string fold_case(std::string_view utf8);

// Maps app names to a comparison key: trimmed, case folded, then resolved
// through an alias table ("chrome" -> "google chrome").
class AppNameMatcher {
public:
    // Starts with the built-in aliases.
    AppNameMatcher();

    static AppNameMatcher empty();

    void add_alias(std::string_view alias, std::string_view canonical);

    // "alias = canonical" per line; '#' starts a comment. Throws
    // std::runtime_error on a malformed line.
    void load_aliases(std::string_view text);

    std::string canonical(std::string_view name) const;

    const std::map<std::string, std::string>& aliases() const { return aliases_; }

private:
    struct NoDefaults {};
    explicit AppNameMatcher(NoDefaults) {}

    std::map<std::string, std::string> aliases_;
};

}  // namespace usage_synth
