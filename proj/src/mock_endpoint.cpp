#include "usage_synth/mock_endpoint.hpp"

#include "httplib.h"

#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

namespace usage_synth {

struct MockChatServer::Impl {
    httplib::Server server;
    std::thread thread;
    int port = 0;

    mutable std::mutex mutex;
    std::vector<std::string> replies;
    std::size_t served = 0;
    std::optional<std::pair<int, std::string>> failure;
    std::vector<nlohmann::json> requests;
    std::vector<std::string> auth_headers;
};

MockChatServer::MockChatServer(std::vector<std::string> replies) : impl_(std::make_unique<Impl>()) {
    if (replies.empty()) {
        throw std::invalid_argument("mock server needs at least one reply");
    }
    impl_->replies = std::move(replies);
    auto* impl = impl_.get();
    impl->server.Post("/v1/chat/completions", [impl](const httplib::Request& req, httplib::Response& res) {
        std::lock_guard lock(impl->mutex);
        try {
            impl->requests.push_back(nlohmann::json::parse(req.body));
        } catch (const nlohmann::json::parse_error&) {
            res.status = 400;
            res.set_content(R"({"error":{"message":"body is not JSON"}})", "application/json");
            return;
        }
        impl->auth_headers.push_back(req.get_header_value("Authorization"));
        if (impl->failure) {
            res.status = impl->failure->first;
            res.set_content(impl->failure->second, "application/json");
            return;
        }
        const auto index = impl->served++;
        const auto& text = impl->replies[index % impl->replies.size()];
        nlohmann::json reply = {
            {"id", "mock-" + std::to_string(index + 1)},
            {"object", "chat.completion"},
            {"model", impl->requests.back().value("model", "mock")},
            {"choices",
             {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", text}}}, {"finish_reason", "stop"}}}},
        };
        res.set_content(reply.dump(), "application/json");
    });
    impl->port = impl->server.bind_to_any_port("127.0.0.1");
    if (impl->port <= 0) {
        throw std::runtime_error("mock server could not bind a local port");
    }
    impl->thread = std::thread([impl] { impl->server.listen_after_bind(); });
    impl->server.wait_until_ready();
}

MockChatServer::~MockChatServer() {
    impl_->server.stop();
    if (impl_->thread.joinable()) {
        impl_->thread.join();
    }
}

std::string MockChatServer::base_url() const {
    return "http://127.0.0.1:" + std::to_string(impl_->port) + "/v1";
}

void MockChatServer::fail_with(int status, std::string body) {
    std::lock_guard lock(impl_->mutex);
    impl_->failure = std::make_pair(status, std::move(body));
}

std::vector<nlohmann::json> MockChatServer::requests() const {
    std::lock_guard lock(impl_->mutex);
    return impl_->requests;
}

std::vector<std::string> MockChatServer::authorization_headers() const {
    std::lock_guard lock(impl_->mutex);
    return impl_->auth_headers;
}

}  // namespace usage_synth
