#include "usage_synth/pipeline.hpp"

#include "usage_synth/extract.hpp"
#include "usage_synth/io.hpp"

#include <array>

namespace usage_synth {

namespace {

nlohmann::ordered_json messages_json(const std::vector<ChatMessage>& messages) {
    auto out = nlohmann::ordered_json::array();
    for (const auto& m : messages) {
        out.push_back({{"role", std::string{to_string(m.role)}}, {"content", m.text}});
    }
    return out;
}

// The generated prompt should describe the four-column schema.
std::vector<std::string> missing_columns(const std::string& text) {
    std::vector<std::string> missing;
    for (const char* col : {"id", "created-at", "app-id", "time-seconds"}) {
        if (text.find(col) == std::string::npos) {
            missing.emplace_back(col);
        }
    }
    return missing;
}

}  // namespace

GenerationRun run_generation(const PromptSpec& prompt, const EndpointConfig& endpoint, int attempt,
                             const std::optional<std::filesystem::path>& out_dir) {
    if (attempt < 1) {
        throw std::invalid_argument("attempt numbers start at 1");
    }
    GenerationRun run;
    run.prompt = prompt;
    run.attempt = attempt;
    run.endpoint = endpoint.base_url;
    run.model_name = endpoint.model;
    run.started_at = utc_now_iso8601();

    const ChatClient client(endpoint);
    run.raw_replies.push_back(client.complete(prompt.messages));
    run.reply_count = static_cast<int>(run.raw_replies.size());
    if (out_dir) {
        write_file_atomic(*out_dir / "reply_1.txt", run.raw_replies.front());
    }

    try {
        auto extracted = extract_csv(run.raw_replies.front());
        run.extracted_csv = std::move(extracted.csv);
        run.warnings = std::move(extracted.warnings);
    } catch (const ExtractError& e) {
        run.warnings.emplace_back(e.what());
    }
    run.finished_at = utc_now_iso8601();

    if (out_dir) {
        if (run.extracted_csv) {
            write_file_atomic(*out_dir / "extracted.csv", *run.extracted_csv);
        }
        write_file_atomic(*out_dir / "run.json", run_metadata(run).dump(2) + "\n");
    }
    return run;
}

nlohmann::ordered_json run_metadata(const GenerationRun& run) {
    nlohmann::ordered_json j;
    j["prompt_label"] = std::string{to_string(run.prompt.label)};
    j["detail"] = std::string{to_string(run.prompt.detail)};
    j["uses_seed"] = run.prompt.uses_seed;
    j["seed_delivery"] = run.prompt.uses_seed ? nlohmann::ordered_json("inline in message text") : nullptr;
    j["role_split"] = "all prompt text sent as user-role messages";
    j["attempt"] = run.attempt;
    j["endpoint"] = run.endpoint;
    j["model"] = run.model_name;
    j["fresh_conversation"] = true;
    j["reply_count"] = run.reply_count;
    j["started_at"] = run.started_at;
    j["finished_at"] = run.finished_at;
    j["extracted"] = run.extracted_csv.has_value();
    j["warnings"] = run.warnings;
    j["messages"] = messages_json(run.prompt.messages);
    return j;
}

SelfPromptResult self_prompt(const EndpointConfig& endpoint, const std::optional<std::filesystem::path>& out_dir) {
    const ChatClient client(endpoint);
    SelfPromptResult result;
    auto& conv = result.conversation;

    conv.push_back({Role::user, std::string{prompt_template("self_prompt_meta")}});
    result.detailed_prompt_text = client.complete(conv);
    conv.push_back({Role::assistant, result.detailed_prompt_text});

    conv.push_back({Role::user, std::string{prompt_template("self_prompt_followup")}});
    result.follow_up_text = client.complete(conv);
    conv.push_back({Role::assistant, result.follow_up_text});

    const std::array<std::pair<const char*, const std::string*>, 2> replies = {{
        {"detailed prompt", &result.detailed_prompt_text},
        {"seeded prompt", &result.follow_up_text},
    }};
    for (const auto& [what, text] : replies) {
        const auto missing = missing_columns(*text);
        if (!missing.empty()) {
            std::string cols;
            for (const auto& c : missing) {
                cols += (cols.empty() ? "" : ", ") + c;
            }
            result.warnings.push_back(std::string{what} + " does not mention column(s): " + cols +
                                      "; stored as returned");
        }
    }

    if (out_dir) {
        write_file_atomic(*out_dir / "self_prompt_detailed.txt", result.detailed_prompt_text);
        write_file_atomic(*out_dir / "self_prompt_seeded.txt", result.follow_up_text);
        nlohmann::ordered_json j;
        j["endpoint"] = endpoint.base_url;
        j["model"] = endpoint.model;
        j["conversation"] = messages_json(conv);
        j["warnings"] = result.warnings;
        write_file_atomic(*out_dir / "self_prompt_conversation.json", j.dump(2) + "\n");
    }
    return result;
}

}  // namespace usage_synth
