#pragma once

#include "json.hpp"

#include <memory>
#include <string>
#include <vector>

namespace usage_synth {

// Local chat-completions stand-in on 127.0.0.1 with an ephemeral port.
// Replies are served in order and cycle when exhausted. Every request body
// is recorded so tests can inspect what was sent.
class MockChatServer {
public:
    explicit MockChatServer(std::vector<std::string> replies);
    ~MockChatServer();

    MockChatServer(const MockChatServer&) = delete;
    MockChatServer& operator=(const MockChatServer&) = delete;

    // http://127.0.0.1:<port>/v1
    std::string base_url() const;

    // Subsequent requests get this status and body instead of a reply.
    void fail_with(int status, std::string body);

    std::vector<nlohmann::json> requests() const;
    std::vector<std::string> authorization_headers() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace usage_synth
