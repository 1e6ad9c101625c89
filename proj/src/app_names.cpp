#include "usage_synth/app_names.hpp"

#include "usage_synth/csv.hpp"

#include <stdexcept>
#include <utility>

namespace usage_synth {

namespace {

char32_t fold(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') {
        return cp + 0x20;
    }
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) {
        return cp + 0x20;
    }
    if (cp >= 0x100 && cp <= 0x17F) {
        // Latin Extended-A alternates upper/lower, with an offset run at 0x139..0x148 and 0x179..0x17E
        const bool odd_upper = (cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E);
        if (cp == 0x178) {
            return 0xFF;
        }
        if (cp == 0x130 || cp == 0x131 || cp == 0x138 || cp == 0x149 || cp == 0x17F) {
            return cp;
        }
        if (odd_upper) {
            return (cp % 2 == 1) ? cp + 1 : cp;
        }
        return (cp % 2 == 0) ? cp + 1 : cp;
    }
    if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) {
        return cp + 0x20;
    }
    if (cp >= 0x410 && cp <= 0x42F) {
        return cp + 0x20;
    }
    if (cp >= 0x400 && cp <= 0x40F) {
        return cp + 0x50;
    }
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Built-in aliases: display names and Android package names seen in
// platform-tools usage dumps.
constexpr std::pair<std::string_view, std::string_view> kDefaultAliases[] = {
    {"chrome", "google chrome"},
    {"com.android.chrome", "google chrome"},
    {"maps", "google maps"},
    {"com.google.android.apps.maps", "google maps"},
    {"com.whatsapp", "whatsapp"},
    {"whats app", "whatsapp"},
    {"com.instagram.android", "instagram"},
    {"org.lichess.mobileapp", "lichess"},
    {"lichess.org", "lichess"},
    {"com.google.android.youtube", "youtube"},
    {"x", "twitter"},
    {"x (twitter)", "twitter"},
    {"twitter (x)", "twitter"},
    {"com.spotify.music", "spotify"},
    {"com.netflix.mediaclient", "netflix"},
    {"com.google.android.gm", "gmail"},
    {"google messages", "messages"},
};

}  // namespace

std::string fold_case(std::string_view utf8) {
    std::string out;
    out.reserve(utf8.size());
    std::size_t i = 0;
    while (i < utf8.size()) {
        const auto b0 = static_cast<unsigned char>(utf8[i]);
        std::size_t len = 0;
        char32_t cp = 0;
        if (b0 < 0x80) {
            len = 1;
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        }
        bool valid = len > 0 && i + len <= utf8.size();
        for (std::size_t k = 1; valid && k < len; ++k) {
            const auto b = static_cast<unsigned char>(utf8[i + k]);
            valid = (b & 0xC0) == 0x80;
            cp = (cp << 6) | (b & 0x3F);
        }
        if (!valid) {
            out.push_back(utf8[i]);
            ++i;
            continue;
        }
        append_utf8(out, fold(cp));
        i += len;
    }
    return out;
}

AppNameMatcher::AppNameMatcher() {
    for (const auto& [alias, canonical] : kDefaultAliases) {
        add_alias(alias, canonical);
    }
}

AppNameMatcher AppNameMatcher::empty() {
    return AppNameMatcher{NoDefaults{}};
}

void AppNameMatcher::add_alias(std::string_view alias, std::string_view canonical) {
    aliases_[fold_case(csv::trim(alias))] = fold_case(csv::trim(canonical));
}

void AppNameMatcher::load_aliases(std::string_view text) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = csv::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos || csv::trim(line.substr(0, eq)).empty() ||
            csv::trim(line.substr(eq + 1)).empty()) {
            throw std::runtime_error("alias line " + std::to_string(line_no) + ": expected 'alias = canonical'");
        }
        add_alias(line.substr(0, eq), line.substr(eq + 1));
    }
}

std::string AppNameMatcher::canonical(std::string_view name) const {
    auto key = fold_case(csv::trim(name));
    if (auto it = aliases_.find(key); it != aliases_.end()) {
        return it->second;
    }
    return key;
}

}  // namespace usage_synth
