#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <string>

namespace lxtopic {

struct LlmClientConfig {
    std::string endpoint;              // full URL, e.g. http://localhost:8080/v1/chat/completions
    std::string model = "llama3.1-8b";
    int timeout_seconds = 30;
    int max_retries = 2;
    std::string api_key_env = "LX_LLM_API_KEY";
    double temperature = 0.0;
    std::chrono::milliseconds retry_backoff{500}; // doubled after each failed attempt
};

/// OpenAI-compatible chat-completion client. Thread-safe: each call opens its
/// own connection.
class LlmClient {
public:
    explicit LlmClient(LlmClientConfig config);

    /// Sends one user message and returns choices[0].message.content.
    /// Retries on connection errors, 429 and 5xx. Throws Error{LlmUnavailable}
    /// once retries are exhausted or on a non-retryable response.
    std::string complete(const std::string& prompt) const;

    const LlmClientConfig& config() const { return config_; }

    /// Process-wide count of HTTP requests attempted; lets tests assert that
    /// offline runs never touch the network.
    static std::size_t requests_attempted() { return requests_.load(); }

private:
    LlmClientConfig config_;
    std::string scheme_host_;
    std::string path_;
    static std::atomic<std::size_t> requests_;
};

} // namespace lxtopic
