#include "doctest.h"
#include "support.hpp"

#include "usage_synth/chat_client.hpp"
#include "usage_synth/extract.hpp"
#include "usage_synth/mock_endpoint.hpp"
#include "usage_synth/pipeline.hpp"
#include "usage_synth/prompts.hpp"

#include <cstdlib>

using namespace usage_synth;
using namespace test_support;

namespace {

const std::string kSeedSnippet = read_file(golden("seed_snippet.csv"));

EndpointConfig mock_endpoint(const MockChatServer& server) {
    EndpointConfig ep;
    ep.base_url = server.base_url();
    ep.model = "mock-model";
    ep.timeout_s = 5;
    ep.retries = 0;
    return ep;
}

const std::string kCsvReply =
    "Sure.\n```csv\nid,created-at,app-id,time-seconds\n1,2025-04-18T08:00:00,WhatsApp,20\n"
    "2,2025-04-18T08:01:00,Lichess,300\n```\nDone.";

}  // namespace

TEST_CASE("prompt characteristics per label") {
    CHECK(detail_of(PromptLabel::P1) == DetailLevel::non_detailed);
    CHECK(detail_of(PromptLabel::P2) == DetailLevel::non_detailed);
    CHECK(detail_of(PromptLabel::P3) == DetailLevel::detailed);
    CHECK(detail_of(PromptLabel::P4) == DetailLevel::detailed);
    CHECK_FALSE(uses_seed(PromptLabel::P1));
    CHECK(uses_seed(PromptLabel::P2));
    CHECK_FALSE(uses_seed(PromptLabel::P3));
    CHECK(uses_seed(PromptLabel::P4));
}

TEST_CASE("rendered prompts match the golden files byte for byte") {
    CHECK(render_prompt_file(build_prompt(PromptLabel::P1)) == read_file(golden("p1.txt")));
    CHECK(render_prompt_file(build_prompt(PromptLabel::P2, kSeedSnippet)) == read_file(golden("p2.txt")));
    CHECK(render_prompt_file(build_prompt(PromptLabel::P3)) == read_file(golden("p3.txt")));
    CHECK(render_prompt_file(build_prompt(PromptLabel::P4, kSeedSnippet)) == read_file(golden("p4.txt")));
}

TEST_CASE("prompt messages use the bundled templates verbatim") {
    const auto p1 = build_prompt(PromptLabel::P1);
    REQUIRE(p1.messages.size() == 2);
    CHECK(p1.messages[0].text == prompt_template("p1_setup"));
    CHECK(p1.messages[1].text == prompt_template("p1_instruction"));
    for (const auto& m : p1.messages) {
        CHECK(m.role == Role::user);
    }

    const auto p3 = build_prompt(PromptLabel::P3);
    REQUIRE(p3.messages.size() == 1);
    CHECK(p3.messages[0].text == prompt_template("p3"));

    const auto p4 = build_prompt(PromptLabel::P4, kSeedSnippet);
    REQUIRE(p4.messages.size() == 1);
    const auto& text = p4.messages[0].text;
    CHECK(text.starts_with(prompt_template("p4")));
    CHECK(text.ends_with(kSeedSnippet));

    const auto p2 = build_prompt(PromptLabel::P2, kSeedSnippet);
    CHECK(p2.messages[0].text.find(kSeedSnippet) != std::string::npos);
    CHECK(p2.messages[1].text == prompt_template("p2_instruction"));

    CHECK(prompt_template_names().size() == 8);
    CHECK_THROWS_AS(prompt_template("nope"), std::out_of_range);
}

TEST_CASE("seed must match the label") {
    CHECK_THROWS_AS(build_prompt(PromptLabel::P2), PromptError);
    CHECK_THROWS_AS(build_prompt(PromptLabel::P4), PromptError);
    CHECK_THROWS_AS(build_prompt(PromptLabel::P1, kSeedSnippet), PromptError);
    CHECK_THROWS_AS(build_prompt(PromptLabel::P3, kSeedSnippet), PromptError);
}

TEST_CASE("extract_csv") {
    const std::string pure = "id,created-at,app-id,time-seconds\n1,2025-04-18T08:00:00,A,2\n";
    CHECK(extract_csv(pure).csv == pure);
    CHECK(extract_csv(pure).warnings.empty());

    const auto fenced = extract_csv(kCsvReply);
    CHECK(fenced.csv ==
          "id,created-at,app-id,time-seconds\n1,2025-04-18T08:00:00,WhatsApp,20\n2,2025-04-18T08:01:00,Lichess,300\n");

    const std::string two =
        "First try:\n```\nid,timestamp,app,duration\n1,2025-04-18 08:00:00,A,1\n```\n"
        "Better:\n```\nid,timestamp,app,duration\n1,2025-04-18 08:00:00,A,1\n2,2025-04-18 09:00:00,B,2\n```\n";
    const auto picked = extract_csv(two);
    CHECK(picked.csv.find("09:00:00") != std::string::npos);
    CHECK(picked.warnings.size() == 1);
    CHECK(extract_csv(two).csv == picked.csv);

    CHECK_THROWS_AS(extract_csv("I cannot help with that."), ExtractError);
    CHECK_THROWS_AS(extract_csv("app,duration\nA,1\n"), ExtractError);
}

TEST_CASE("property: extract_csv is idempotent") {
    std::mt19937_64 rng(501);
    const std::vector<std::string> noise = {"Here you go:", "```csv", "```", "", "Note: values are estimates.",
                                            "a, b, c", "id,timestamp,app,duration"};
    for (int round = 0; round < 200; ++round) {
        std::string reply;
        const auto lines = std::uniform_int_distribution<int>(1, 30)(rng);
        for (int i = 0; i < lines; ++i) {
            if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
                reply += noise[std::uniform_int_distribution<std::size_t>(0, noise.size() - 1)(rng)];
            } else {
                reply += std::to_string(i) + ",2025-04-18 08:00:0" + std::to_string(i % 10) + ",A," + std::to_string(i);
            }
            reply += "\n";
        }
        try {
            const auto once = extract_csv(reply).csv;
            CHECK(extract_csv(once).csv == once);
        } catch (const ExtractError&) {
        }
    }
}

TEST_CASE("run_generation sends one fresh request and stores the raw reply first") {
    MockChatServer server({kCsvReply});
    const auto dir = temp_dir("gen");
    const auto prompt = build_prompt(PromptLabel::P3);
    const auto run = run_generation(prompt, mock_endpoint(server), 1, dir);

    CHECK(run.reply_count == 1);
    CHECK(run.raw_replies.size() == 1);
    CHECK(run.raw_replies[0] == kCsvReply);
    REQUIRE(run.extracted_csv);
    CHECK(parse_dataset(*run.extracted_csv).logs.size() == 2);
    CHECK(read_file(dir / "reply_1.txt") == kCsvReply);
    CHECK(std::filesystem::exists(dir / "extracted.csv"));

    const auto meta = nlohmann::json::parse(read_file(dir / "run.json"));
    CHECK(meta["fresh_conversation"] == true);
    CHECK(meta["reply_count"] == 1);
    CHECK(meta["prompt_label"] == "P3");

    const auto requests = server.requests();
    REQUIRE(requests.size() == 1);
    CHECK(requests[0]["model"] == "mock-model");
    CHECK(requests[0]["messages"].size() == 1);
    CHECK(requests[0]["messages"][0]["role"] == "user");
    CHECK(requests[0]["messages"][0]["content"] == prompt_template("p3"));
    CHECK_FALSE(requests[0].contains("temperature"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("two attempts are independent conversations") {
    MockChatServer server({kCsvReply, "Here is a summary instead."});
    const auto prompt = build_prompt(PromptLabel::P2, kSeedSnippet);
    const auto first = run_generation(prompt, mock_endpoint(server), 1);
    const auto second = run_generation(prompt, mock_endpoint(server), 2);
    CHECK(first.attempt == 1);
    CHECK(second.attempt == 2);
    CHECK(first.extracted_csv.has_value());
    CHECK_FALSE(second.extracted_csv.has_value());
    CHECK_FALSE(second.warnings.empty());
    const auto requests = server.requests();
    REQUIRE(requests.size() == 2);
    // The second request carries no trace of the first reply.
    CHECK(requests[0]["messages"] == requests[1]["messages"]);
    CHECK(requests[1]["messages"].size() == 2);
    CHECK_THROWS_AS(run_generation(prompt, mock_endpoint(server), 0), std::invalid_argument);
}

TEST_CASE("api key is sent as a bearer token") {
    MockChatServer server({kCsvReply});
    auto ep = mock_endpoint(server);
    ep.api_key = "sk-test";
    ep.temperature = 0.5;
    ChatClient client(ep);
    client.complete({{Role::user, "hi"}});
    CHECK(server.authorization_headers().at(0) == "Bearer sk-test");
    CHECK(server.requests().at(0)["temperature"] == 0.5);

    ::setenv(kApiKeyEnv, "from-env", 1);
    CHECK(api_key_from_env() == "from-env");
    ::unsetenv(kApiKeyEnv);
    CHECK_FALSE(api_key_from_env());
}

TEST_CASE("HTTP errors surface with their body") {
    MockChatServer server({kCsvReply});
    server.fail_with(429, "slow down");
    try {
        run_generation(build_prompt(PromptLabel::P1), mock_endpoint(server), 1);
        FAIL("expected HttpError");
    } catch (const HttpError& e) {
        CHECK(e.status() == 429);
        CHECK(e.body() == "slow down");
    }
}

TEST_CASE("malformed 2xx replies are reported") {
    MockChatServer server({kCsvReply});
    server.fail_with(200, "{\"choices\": []}");
    CHECK_THROWS_AS(ChatClient(mock_endpoint(server)).complete({{Role::user, "hi"}}), MalformedReply);
}

TEST_CASE("unreachable endpoint fails after the configured retries") {
    EndpointConfig ep;
    {
        MockChatServer server({kCsvReply});
        ep = mock_endpoint(server);
    }  // server gone; the port is now closed
    ep.retries = 2;
    ep.timeout_s = 2;
    try {
        ChatClient(ep).complete({{Role::user, "hi"}});
        FAIL("expected TransportError");
    } catch (const TransportError& e) {
        CHECK(e.attempts() == 3);
    }
    ep.base_url = "ftp://example.invalid";
    CHECK_THROWS_AS(ChatClient{ep}, std::invalid_argument);
}

TEST_CASE("self_prompt keeps one conversation and writes new files") {
    const std::string detailed = "Generate rows with id, created-at, app-id and time-seconds columns.";
    const std::string seeded = "Use the attached seed; keep columns id, created-at, app-id, time-seconds.";
    MockChatServer server({detailed, seeded});
    const auto dir = temp_dir("self");
    const auto result = self_prompt(mock_endpoint(server), dir);
    CHECK(result.detailed_prompt_text == detailed);
    CHECK(result.follow_up_text == seeded);
    CHECK(result.conversation.size() == 4);
    CHECK(result.warnings.empty());

    const auto requests = server.requests();
    REQUIRE(requests.size() == 2);
    CHECK(requests[0]["messages"].size() == 1);
    CHECK(requests[0]["messages"][0]["content"] == prompt_template("self_prompt_meta"));
    CHECK(requests[1]["messages"].size() == 3);
    CHECK(requests[1]["messages"][1]["role"] == "assistant");
    CHECK(requests[1]["messages"][2]["content"] == prompt_template("self_prompt_followup"));

    CHECK(read_file(dir / "self_prompt_detailed.txt") == detailed);
    CHECK(read_file(dir / "self_prompt_seeded.txt") == seeded);
    std::filesystem::remove_all(dir);
}

TEST_CASE("self_prompt warns when a reply omits the schema") {
    MockChatServer server({"Just make something up."});
    const auto result = self_prompt(mock_endpoint(server));
    CHECK(result.warnings.size() == 2);
    CHECK(result.detailed_prompt_text == "Just make something up.");
}
