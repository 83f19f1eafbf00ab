// SPDX-License-Identifier: Apache-2.0
#include "http_backend.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "error.hpp"

namespace agentnet {

namespace {

std::string env_or(const char* name, std::string fallback) {
    if (const char* v = std::getenv(name); v && *v)
        return v;
    return fallback;
}

} // namespace

HttpBackendConfig HttpBackendConfig::from_environment(HttpBackendConfig base) {
    base.api_base = env_or("AGENTNET_API_BASE", base.api_base);
    base.api_key = env_or("AGENTNET_API_KEY", base.api_key);
    base.model = env_or("AGENTNET_MODEL", base.model);
    base.embed_model = env_or("AGENTNET_EMBED_MODEL", base.embed_model);
    return base;
}

HttpBackendConfig HttpBackendConfig::from_environment() { return from_environment(HttpBackendConfig{}); }

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
    if (config_.max_attempts < 1)
        throw Error(ErrorKind::InvalidConfiguration, "max_attempts must be >= 1");
    const auto scheme_end = config_.api_base.find("://");
    if (scheme_end == std::string::npos)
        throw Error(ErrorKind::InvalidConfiguration, "api base needs a scheme: " + config_.api_base);
    const auto path_start = config_.api_base.find('/', scheme_end + 3);
    origin_ = config_.api_base.substr(0, path_start);
    prefix_ = path_start == std::string::npos ? "" : config_.api_base.substr(path_start);
    while (!prefix_.empty() && prefix_.back() == '/')
        prefix_.pop_back();
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (origin_.rfind("https://", 0) == 0)
        throw Error(ErrorKind::InvalidConfiguration, "built without TLS support; https endpoints unavailable");
#endif
}

HttpBackend::~HttpBackend() = default;

std::string HttpBackend::post_json(const std::string& path, const std::string& body) {
    httplib::Client client(origin_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    httplib::Headers headers;
    if (!config_.api_key.empty())
        headers.emplace("Authorization", "Bearer " + config_.api_key);

    std::string last_error;
    auto delay = config_.backoff;
    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        auto res = client.Post(prefix_ + path, headers, body, "application/json");
        if (res && res->status >= 200 && res->status < 300)
            return res->body;
        if (res) {
            last_error = "HTTP " + std::to_string(res->status) + " from " + path + ": " + res->body.substr(0, 200);
            // Client errors other than rate limiting will not improve on retry.
            if (res->status >= 400 && res->status < 500 && res->status != 429)
                break;
        } else {
            last_error = "request to " + path + " failed: " + httplib::to_string(res.error());
        }
        if (attempt < config_.max_attempts) {
            std::this_thread::sleep_for(delay);
            delay *= 2;
        }
    }
    throw Error(ErrorKind::Backend, last_error);
}

std::string HttpBackend::do_complete(const CompletionRequest& request) {
    nlohmann::json messages = nlohmann::json::array();
    if (!request.system_prompt.empty())
        messages.push_back({{"role", "system"}, {"content", request.system_prompt}});
    messages.push_back({{"role", "user"}, {"content", request.user_prompt}});
    const nlohmann::json body = {
        {"model", config_.model},
        {"messages", std::move(messages)},
        {"temperature", request.temperature},
        {"max_tokens", request.max_tokens},
        {"top_p", request.top_p},
    };
    const std::string raw = post_json("/chat/completions", body.dump());
    try {
        const auto doc = nlohmann::json::parse(raw);
        return doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Backend, std::string("malformed chat completion response: ") + e.what());
    }
}

EmbeddingVector HttpBackend::do_embed(std::string_view text) {
    const nlohmann::json body = {{"model", config_.embed_model}, {"input", std::string(text)}};
    const std::string raw = post_json("/embeddings", body.dump());
    try {
        const auto doc = nlohmann::json::parse(raw);
        EmbeddingVector vec;
        vec.values = doc.at("data").at(0).at("embedding").get<std::vector<double>>();
        vec.model_id = doc.value("model", config_.embed_model);
        return vec;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Backend, std::string("malformed embedding response: ") + e.what());
    }
}

} // namespace agentnet
