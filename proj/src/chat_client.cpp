#include "usage_synth/chat_client.hpp"

#include "httplib.h"

#include <cstdlib>

namespace usage_synth {

std::optional<std::string> api_key_from_env() {
    if (const char* key = std::getenv(kApiKeyEnv); key != nullptr && *key != '\0') {
        return std::string{key};
    }
    return std::nullopt;
}

ChatClient::ChatClient(EndpointConfig config) : config_(std::move(config)) {
    const auto& url = config_.base_url;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw std::invalid_argument("endpoint URL needs a scheme: " + url);
    }
    const auto scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") {
        throw std::invalid_argument("unsupported endpoint scheme: " + scheme);
    }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (scheme == "https") {
        throw std::invalid_argument("this build has no TLS support; use an http:// endpoint");
    }
#endif
    const auto path_start = url.find('/', scheme_end + 3);
    origin_ = url.substr(0, path_start);
    std::string prefix = path_start == std::string::npos ? "" : url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') {
        prefix.pop_back();
    }
    path_ = prefix + "/chat/completions";
}

nlohmann::json ChatClient::request_body(const std::vector<ChatMessage>& messages) const {
    nlohmann::json body;
    body["model"] = config_.model;
    body["messages"] = nlohmann::json::array();
    for (const auto& m : messages) {
        body["messages"].push_back({{"role", std::string{to_string(m.role)}}, {"content", m.text}});
    }
    if (config_.temperature) {
        body["temperature"] = *config_.temperature;
    }
    return body;
}

std::string ChatClient::complete(const std::vector<ChatMessage>& messages) const {
    const std::string body = request_body(messages).dump();
    httplib::Headers headers;
    if (config_.api_key) {
        headers.emplace("Authorization", "Bearer " + *config_.api_key);
    }

    const int max_attempts = 1 + std::max(0, config_.retries);
    std::string last_error;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        httplib::Client client(origin_);
        client.set_connection_timeout(std::min(config_.timeout_s, 30), 0);
        client.set_read_timeout(config_.timeout_s, 0);
        client.set_write_timeout(config_.timeout_s, 0);
        auto res = client.Post(path_, headers, body, "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 400) {
            throw HttpError(res->status, res->body);
        }
        nlohmann::json reply;
        try {
            reply = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::parse_error& e) {
            throw MalformedReply(std::string{"reply is not JSON: "} + e.what());
        }
        const auto* content = [&]() -> const nlohmann::json* {
            if (!reply.contains("choices") || !reply["choices"].is_array() || reply["choices"].empty()) {
                return nullptr;
            }
            const auto& first = reply["choices"][0];
            if (!first.contains("message") || !first["message"].contains("content") ||
                !first["message"]["content"].is_string()) {
                return nullptr;
            }
            return &first["message"]["content"];
        }();
        if (content == nullptr) {
            throw MalformedReply("reply has no choices[0].message.content: " + res->body.substr(0, 200));
        }
        return content->get<std::string>();
    }
    throw TransportError("endpoint " + config_.base_url + " unreachable after " + std::to_string(max_attempts) +
                             " attempt(s): " + last_error,
                         max_attempts);
}

}  // namespace usage_synth
