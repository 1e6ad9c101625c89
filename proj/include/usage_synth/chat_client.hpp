#pragma once

#include "usage_synth/prompts.hpp"

#include "json.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace usage_synth {

inline constexpr const char* kApiKeyEnv = "USAGE_SYNTH_API_KEY";

struct EndpointConfig {
    std::string base_url;  // e.g. https://api.openai.com/v1
    std::string model;
    std::optional<std::string> api_key;
    int timeout_s = 300;
    int retries = 2;  // extra attempts after a transport failure
    // Sampling parameters are left to the endpoint unless set.
    std::optional<double> temperature;
};

std::optional<std::string> api_key_from_env();

// No HTTP response at all (refused, unreachable, timed out).
class TransportError : public std::runtime_error {
public:
    TransportError(const std::string& what, int attempts) : std::runtime_error(what), attempts_(attempts) {}
    int attempts() const { return attempts_; }

private:
    int attempts_;
};

class HttpError : public std::runtime_error {
public:
    HttpError(int status, std::string body)
        : std::runtime_error("endpoint returned HTTP " + std::to_string(status) + ": " + body),
          status_(status),
          body_(std::move(body)) {}
    int status() const { return status_; }
    const std::string& body() const { return body_; }

private:
    int status_;
    std::string body_;
};

// 2xx response without choices[0].message.content.
class MalformedReply : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Minimal OpenAI-compatible chat-completions client. Each call is one
// stateless request; conversation state lives entirely in the messages.
class ChatClient {
public:
    explicit ChatClient(EndpointConfig config);

    nlohmann::json request_body(const std::vector<ChatMessage>& messages) const;

    // POST <base_url>/chat/completions; returns the first choice's content.
    std::string complete(const std::vector<ChatMessage>& messages) const;

    const EndpointConfig& config() const { return config_; }

private:
    EndpointConfig config_;
    std::string origin_;  // scheme://host[:port]
    std::string path_;    // path prefix + /chat/completions
};

}  // namespace usage_synth
