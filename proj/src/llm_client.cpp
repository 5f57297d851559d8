#include "lxtopic/llm_client.hpp"

#include "lxtopic/error.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <thread>

namespace lxtopic {

std::atomic<std::size_t> LlmClient::requests_{0};

namespace {

bool retryable(int status) { return status == 429 || status >= 500; }

} // namespace

LlmClient::LlmClient(LlmClientConfig config) : config_(std::move(config)) {
    const std::string& url = config_.endpoint;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(ErrorCode::InvalidConfig, "llm_client", "endpoint '" + url + "' lacks a scheme");
    }
    const auto path_start = url.find('/', scheme_end + 3);
    scheme_host_ = url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
    if (config_.max_retries < 0) throw Error(ErrorCode::InvalidConfig, "llm_client", "max_retries must be >= 0");
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (url.rfind("https://", 0) == 0) {
        throw Error(ErrorCode::InvalidConfig, "llm_client", "built without TLS support; use an http:// endpoint");
    }
#endif
}

std::string LlmClient::complete(const std::string& prompt) const {
    const nlohmann::json request = {
        {"model", config_.model},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
        {"temperature", config_.temperature},
    };
    const std::string body = request.dump();

    httplib::Headers headers = {{"Accept", "application/json"}};
    if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    std::string last_error;
    auto backoff = config_.retry_backoff;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
        httplib::Client client(scheme_host_);
        client.set_connection_timeout(config_.timeout_seconds, 0);
        client.set_read_timeout(config_.timeout_seconds, 0);
        client.set_write_timeout(config_.timeout_seconds, 0);
        ++requests_;
        auto result = client.Post(path_, headers, body, "application/json");
        if (!result) {
            last_error = "connection failed: " + httplib::to_string(result.error());
            continue;
        }
        if (result->status < 200 || result->status >= 300) {
            last_error = "HTTP " + std::to_string(result->status);
            if (retryable(result->status)) continue;
            break;
        }
        try {
            const auto response = nlohmann::json::parse(result->body);
            return response.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            // Malformed envelopes are not retried.
            throw Error(ErrorCode::LlmUnavailable, "llm_client", std::string("unexpected response shape: ") + e.what());
        }
    }
    throw Error(ErrorCode::LlmUnavailable, "llm_client", last_error);
}

} // namespace lxtopic
