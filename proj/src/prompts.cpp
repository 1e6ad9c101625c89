#include "usage_synth/prompts.hpp"

namespace usage_synth {

std::string_view to_string(DetailLevel detail) {
    return detail == DetailLevel::detailed ? "detailed" : "non_detailed";
}

std::string_view to_string(Role role) {
    switch (role) {
        case Role::system: return "system";
        case Role::user: return "user";
        case Role::assistant: return "assistant";
    }
    return "user";
}

std::optional<Role> role_from_string(std::string_view s) {
    for (auto r : {Role::system, Role::user, Role::assistant}) {
        if (to_string(r) == s) {
            return r;
        }
    }
    return std::nullopt;
}

DetailLevel detail_of(PromptLabel label) {
    return (label == PromptLabel::P3 || label == PromptLabel::P4) ? DetailLevel::detailed : DetailLevel::non_detailed;
}

bool uses_seed(PromptLabel label) {
    return label == PromptLabel::P2 || label == PromptLabel::P4;
}

std::string_view prompt_template(std::string_view name) {
    for (const auto& [key, text] : detail::embedded_templates()) {
        if (key == name) {
            return text;
        }
    }
    throw std::out_of_range("no bundled prompt template named '" + std::string{name} + "'");
}

std::vector<std::string_view> prompt_template_names() {
    std::vector<std::string_view> out;
    for (const auto& entry : detail::embedded_templates()) {
        out.push_back(entry.first);
    }
    return out;
}

PromptSpec build_prompt(PromptLabel label, std::optional<std::string_view> seed_csv) {
    const bool seeded = uses_seed(label);
    if (seeded && !seed_csv) {
        throw PromptError(std::string{to_string(label)} + " requires seed data");
    }
    if (!seeded && seed_csv) {
        throw PromptError(std::string{to_string(label)} + " does not take seed data");
    }

    PromptSpec spec;
    spec.label = label;
    spec.detail = detail_of(label);
    spec.uses_seed = seeded;
    auto user = [&](std::string text) { spec.messages.push_back({Role::user, std::move(text)}); };
    auto with_seed = [&](std::string_view text) {
        std::string out{text};
        out += "\n\n";
        out += *seed_csv;
        return out;
    };

    switch (label) {
        case PromptLabel::P1:
            user(std::string{prompt_template("p1_setup")});
            user(std::string{prompt_template("p1_instruction")});
            break;
        case PromptLabel::P2:
            user(with_seed(prompt_template("p2_setup")));
            user(std::string{prompt_template("p2_instruction")});
            break;
        case PromptLabel::P3:
            user(std::string{prompt_template("p3")});
            break;
        case PromptLabel::P4:
            user(with_seed(prompt_template("p4")));
            break;
    }
    return spec;
}

std::string render_prompt_file(const PromptSpec& prompt) {
    std::string out = "=== prompt " + std::string{to_string(prompt.label)} + " | detail=" +
                      std::string{to_string(prompt.detail)} + " | seed=" + (prompt.uses_seed ? "yes" : "no") +
                      " | messages=" + std::to_string(prompt.messages.size()) + " ===\n";
    for (std::size_t i = 0; i < prompt.messages.size(); ++i) {
        out += "--- message " + std::to_string(i + 1) + " (" + std::string{to_string(prompt.messages[i].role)} +
               ") ---\n";
        out += prompt.messages[i].text;
        out += "\n";
    }
    return out;
}

}  // namespace usage_synth
