#pragma once

#include "usage_synth/chat_client.hpp"
#include "usage_synth/prompts.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace usage_synth {

struct GenerationRun {
    PromptSpec prompt;
    int attempt = 1;
    std::string endpoint;
    std::string model_name;
    int reply_count = 0;
    std::vector<std::string> raw_replies;
    std::optional<std::string> extracted_csv;
    std::vector<std::string> warnings;
    std::string started_at;
    std::string finished_at;
};

// One fresh conversation, exactly one completion, no follow-up prompting.
// When out_dir is given the raw reply is written there (reply_1.txt) before
// any extraction, followed by extracted.csv and run.json. Transport and
// HTTP failures propagate as TransportError / HttpError.
GenerationRun run_generation(const PromptSpec& prompt, const EndpointConfig& endpoint, int attempt,
                             const std::optional<std::filesystem::path>& out_dir = std::nullopt);

nlohmann::ordered_json run_metadata(const GenerationRun& run);

struct SelfPromptResult {
    std::string detailed_prompt_text;  // answer to the meta-prompt
    std::string follow_up_text;        // seeded variant, same conversation
    std::vector<ChatMessage> conversation;
    std::vector<std::string> warnings;
};

// Regenerates detailed prompts from the bundled meta-prompt and follow-up.
// Results go to new files under out_dir (self_prompt_detailed.txt,
// self_prompt_seeded.txt, self_prompt_conversation.json); the bundled
// templates are never touched.
SelfPromptResult self_prompt(const EndpointConfig& endpoint,
                             const std::optional<std::filesystem::path>& out_dir = std::nullopt);

}  // namespace usage_synth
