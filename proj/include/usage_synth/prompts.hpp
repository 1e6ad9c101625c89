#pragma once

#include "usage_synth/model.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace usage_synth {

enum class DetailLevel { non_detailed, detailed };
enum class Role { system, user, assistant };

std::string_view to_string(DetailLevel detail);
std::string_view to_string(Role role);
std::optional<Role> role_from_string(std::string_view s);

struct ChatMessage {
    Role role = Role::user;
    std::string text;

    bool operator==(const ChatMessage&) const = default;
};

struct PromptSpec {
    PromptLabel label = PromptLabel::P1;
    DetailLevel detail = DetailLevel::non_detailed;
    bool uses_seed = false;
    std::vector<ChatMessage> messages;

    bool operator==(const PromptSpec&) const = default;
};

class PromptError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Label characteristics: P1/P2 non-detailed, P3/P4 detailed; P2/P4 seeded.
DetailLevel detail_of(PromptLabel label);
bool uses_seed(PromptLabel label);

// All text goes out as user-role messages. P1/P2 are two messages (setup,
// then instruction). Seed CSV is inlined: appended to the P2 setup message
// and after the P4 instruction block, separated by a blank line. Throws
// PromptError when the seed is missing for P2/P4 or supplied for P1/P3.
PromptSpec build_prompt(PromptLabel label, std::optional<std::string_view> seed_csv = std::nullopt);

// Bundled template text by name (file stem under prompts/), e.g. "p3",
// "p1_setup", "self_prompt_meta". Throws std::out_of_range.
std::string_view prompt_template(std::string_view name);
std::vector<std::string_view> prompt_template_names();

// Labeled plain-text rendering for audit or pasting into a chat product.
std::string render_prompt_file(const PromptSpec& prompt);

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_templates();
}

}  // namespace usage_synth
