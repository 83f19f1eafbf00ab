// SPDX-License-Identifier: Apache-2.0
#include "scripted_backend.hpp"

#include <cctype>
#include <cmath>
#include <fstream>

#include "error.hpp"
#include "rng.hpp"

namespace agentnet {

HashEmbedder::HashEmbedder(std::uint64_t seed, std::size_t dim) : seed_(seed), dim_(dim) {
    if (dim == 0)
        throw Error(ErrorKind::InvalidConfiguration, "embedding dimension must be positive");
}

std::string HashEmbedder::model_id() const {
    return "hash-embed-" + std::to_string(dim_) + "-" + std::to_string(seed_);
}

void HashEmbedder::accumulate(std::vector<double>& acc, std::uint64_t key, double scale) const {
    SplitMix64 gen(key ^ (seed_ * 0x9e3779b97f4a7c15ULL));
    for (double& x : acc)
        x += scale * (2.0 * gen.uniform() - 1.0);
}

std::vector<double> HashEmbedder::operator()(std::string_view text) const {
    std::vector<double> acc(dim_, 0.0);
    std::string token;
    auto flush = [&] {
        if (!token.empty()) {
            accumulate(acc, fnv1a64(token), 1.0);
            token.clear();
        }
    };
    for (unsigned char c : text) {
        if (std::isalnum(c))
            token.push_back(static_cast<char>(std::tolower(c)));
        else
            flush();
    }
    flush();
    accumulate(acc, fnv1a64(text) ^ 0x5bd1e9955bd1e995ULL, 0.5);

    double n = 0.0;
    for (double x : acc)
        n += x * x;
    n = std::sqrt(n);
    for (double& x : acc)
        x /= n;
    return acc;
}

Script Script::ordered(std::vector<std::string> replies) {
    Script s;
    s.kind = Kind::Ordered;
    s.replies = std::move(replies);
    return s;
}

Script Script::from_json(const nlohmann::json& doc) {
    try {
        Script s;
        const std::string kind = doc.value("kind", "ordered");
        if (kind == "ordered") {
            s.kind = Kind::Ordered;
            s.replies = doc.at("replies").get<std::vector<std::string>>();
        } else if (kind == "rules") {
            s.kind = Kind::Rules;
            for (const auto& r : doc.at("rules")) {
                ScriptRule rule;
                rule.match = r.at("match").get<std::string>();
                rule.is_regex = r.value("regex", false);
                rule.reply = r.at("reply").get<std::string>();
                s.rules.push_back(std::move(rule));
            }
            if (doc.contains("default"))
                s.fallback = doc.at("default").get<std::string>();
        } else {
            throw Error(ErrorKind::Schema, "unknown script kind '" + kind + "'");
        }
        if (doc.contains("embedding")) {
            const auto& e = doc.at("embedding");
            s.embed_seed = e.value("seed", std::uint64_t{0});
            s.embed_dim = e.value("dim", std::size_t{64});
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Schema, std::string("malformed script: ") + e.what());
    }
}

Script Script::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open script " + path.string());
    try {
        return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
    }
}

nlohmann::json Script::to_json() const {
    nlohmann::json doc;
    if (kind == Kind::Ordered) {
        doc["kind"] = "ordered";
        doc["replies"] = replies;
    } else {
        doc["kind"] = "rules";
        doc["rules"] = nlohmann::json::array();
        for (const auto& r : rules)
            doc["rules"].push_back({{"match", r.match}, {"regex", r.is_regex}, {"reply", r.reply}});
        if (fallback)
            doc["default"] = *fallback;
    }
    doc["embedding"] = {{"seed", embed_seed}, {"dim", embed_dim}};
    return doc;
}

ScriptedBackend::ScriptedBackend(Script script)
    : script_(std::move(script)), embedder_(script_.embed_seed, script_.embed_dim) {
    for (const auto& rule : script_.rules) {
        if (!rule.is_regex) {
            compiled_.emplace_back();
            continue;
        }
        try {
            compiled_.emplace_back(rule.match, std::regex::ECMAScript);
        } catch (const std::regex_error& e) {
            throw Error(ErrorKind::Schema, "bad script regex '" + rule.match + "': " + e.what());
        }
    }
}

std::size_t ScriptedBackend::replies_consumed() const {
    std::lock_guard lock(cursor_mutex_);
    return cursor_;
}

std::string ScriptedBackend::do_complete(const CompletionRequest& request) {
    if (script_.kind == Script::Kind::Ordered) {
        std::lock_guard lock(cursor_mutex_);
        if (cursor_ >= script_.replies.size())
            throw Error(ErrorKind::ScriptUnderrun,
                        "script exhausted after " + std::to_string(script_.replies.size()) + " replies");
        return script_.replies[cursor_++];
    }
    const std::string haystack = request.system_prompt + "\n" + request.user_prompt;
    for (std::size_t i = 0; i < script_.rules.size(); ++i) {
        const auto& rule = script_.rules[i];
        const bool hit = rule.is_regex ? std::regex_search(haystack, compiled_[i])
                                       : haystack.find(rule.match) != std::string::npos;
        if (hit)
            return rule.reply;
    }
    if (script_.fallback)
        return *script_.fallback;
    throw Error(ErrorKind::ScriptUnderrun, "no script rule matches the prompt");
}

EmbeddingVector ScriptedBackend::do_embed(std::string_view text) {
    return {embedder_(text), embedder_.model_id()};
}

} // namespace agentnet
