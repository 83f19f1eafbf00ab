// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <json.hpp>

#include "backend.hpp"

namespace agentnet {

/// Deterministic text embedder. Each lowercase alphanumeric token and the
/// whole text seed a pseudo-random direction; their sum is normalized to unit
/// length, so texts sharing vocabulary land closer together.
class HashEmbedder {
public:
    explicit HashEmbedder(std::uint64_t seed = 0, std::size_t dim = 64);

    std::vector<double> operator()(std::string_view text) const;

    std::size_t dim() const noexcept { return dim_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::string model_id() const;

private:
    void accumulate(std::vector<double>& acc, std::uint64_t key, double scale) const;

    std::uint64_t seed_;
    std::size_t dim_;
};

struct ScriptRule {
    std::string match; // substring of "<system>\n<user>", or an ECMAScript regex when is_regex
    bool is_regex = false;
    std::string reply;
};

/// Completion script: either replies consumed in order, or the first rule
/// whose pattern matches the prompt.
struct Script {
    enum class Kind { Ordered, Rules };

    Kind kind = Kind::Ordered;
    std::vector<std::string> replies;
    std::vector<ScriptRule> rules;
    std::optional<std::string> fallback;
    std::uint64_t embed_seed = 0;
    std::size_t embed_dim = 64;

    static Script ordered(std::vector<std::string> replies);
    static Script from_json(const nlohmann::json& doc);
    static Script load(const std::filesystem::path& path);
    nlohmann::json to_json() const;
};

class ScriptedBackend : public Backend {
public:
    explicit ScriptedBackend(Script script);

    std::size_t replies_consumed() const;

protected:
    std::string do_complete(const CompletionRequest& request) override;
    EmbeddingVector do_embed(std::string_view text) override;

private:
    Script script_;
    std::vector<std::regex> compiled_;
    HashEmbedder embedder_;
    mutable std::mutex cursor_mutex_;
    std::size_t cursor_ = 0;
};

} // namespace agentnet
