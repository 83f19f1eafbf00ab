// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <string>

#include "backend.hpp"

namespace agentnet {

struct HttpBackendConfig {
    std::string api_base = "http://127.0.0.1:8000/v1"; // scheme://host[:port][/prefix]
    std::string api_key;
    std::string model = "gpt-4o-mini";
    std::string embed_model = "BAAI/bge-large-en-v1.5";
    std::chrono::milliseconds timeout{60000};
    int max_attempts = 3;
    std::chrono::milliseconds backoff{500}; // doubled after every failed attempt

    /// Overrides fields from AGENTNET_API_BASE, AGENTNET_API_KEY,
    /// AGENTNET_MODEL and AGENTNET_EMBED_MODEL when they are set.
    static HttpBackendConfig from_environment(HttpBackendConfig base);
    static HttpBackendConfig from_environment();
};

/// Client for OpenAI-compatible /chat/completions and /embeddings endpoints.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpBackendConfig config);
    ~HttpBackend() override;

    const HttpBackendConfig& config() const noexcept { return config_; }

protected:
    std::string do_complete(const CompletionRequest& request) override;
    EmbeddingVector do_embed(std::string_view text) override;

private:
    std::string post_json(const std::string& path, const std::string& body);

    HttpBackendConfig config_;
    std::string origin_;
    std::string prefix_;
};

} // namespace agentnet
