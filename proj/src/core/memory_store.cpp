// SPDX-License-Identifier: Apache-2.0
#include "memory_store.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "backend.hpp"
#include "error.hpp"
#include "vector_math.hpp"

namespace agentnet {

const char* to_string(MemoryRole role) noexcept { return role == MemoryRole::Router ? "rou" : "exe"; }

std::string embedding_text(std::string_view observation, std::string_view context) {
    std::string text(observation);
    text += '\n';
    text += context;
    return text;
}

Fragment make_fragment(Backend& backend, std::string observation, std::string context, std::string action,
                       TaskIndex now) {
    Fragment f;
    f.embedding = backend.embed(embedding_text(observation, context)).values;
    f.observation = std::move(observation);
    f.context = std::move(context);
    f.action = std::move(action);
    f.created_at = now;
    f.last_used = now;
    return f;
}

void UtilityWeights::validate() const {
    for (double w : {frequency, recency, uniqueness})
        if (!std::isfinite(w) || w < 0.0)
            throw Error(ErrorKind::InvalidConfiguration, "utility weights must be non-negative");
    if (std::abs(frequency + recency + uniqueness - 1.0) > 1e-9)
        throw Error(ErrorKind::InvalidConfiguration, "utility weights must sum to 1");
}

double fragment_utility(const Fragment& fragment, std::span<const Fragment> pool, TaskIndex now,
                        const UtilityWeights& weights) {
    std::uint64_t max_use = fragment.use_count;
    for (const auto& other : pool)
        max_use = std::max(max_use, other.use_count);
    const double freq = static_cast<double>(fragment.use_count) / (1.0 + static_cast<double>(max_use));

    const TaskIndex age = now > fragment.last_used ? now - fragment.last_used : 0;
    const double rec = 1.0 / (1.0 + static_cast<double>(age));

    bool has_other = false;
    double max_sim = 0.0;
    for (const auto& other : pool) {
        if (other.id == fragment.id)
            continue;
        const double s = cosine(fragment.embedding, other.embedding);
        max_sim = has_other ? std::max(max_sim, s) : s;
        has_other = true;
    }
    const double uniq = has_other ? std::clamp(1.0 - max_sim, 0.0, 1.0) : 1.0;

    return weights.frequency * freq + weights.recency * rec + weights.uniqueness * uniq;
}

MemoryModule::MemoryModule(MemoryRole role, std::size_t capacity, UtilityWeights weights, EvictionMode eviction)
    : role_(role), capacity_(capacity), weights_(weights), eviction_(eviction) {
    if (capacity == 0)
        throw Error(ErrorKind::InvalidConfiguration, "memory capacity must be positive");
    weights_.validate();
}

std::vector<RetrievedFragment> MemoryModule::rank(std::span<const double> query, std::size_t k) const {
    if (k == 0)
        throw Error(ErrorKind::InvalidConfiguration, "k must be positive");
    std::vector<RetrievedFragment> scored;
    scored.reserve(fragments_.size());
    for (const auto& f : fragments_)
        scored.push_back({f, cosine(query, f.embedding)});
    // fragments_ is in id order, so a stable sort keeps older fragments first on ties.
    std::stable_sort(scored.begin(), scored.end(),
                     [](const RetrievedFragment& a, const RetrievedFragment& b) { return a.similarity > b.similarity; });
    if (scored.size() > k)
        scored.resize(k);
    return scored;
}

std::vector<RetrievedFragment> MemoryModule::select_fragments(Backend& backend, std::string_view observation,
                                                              std::string_view context, std::size_t k,
                                                              TaskIndex now) {
    if (k == 0)
        throw Error(ErrorKind::InvalidConfiguration, "k must be positive");
    if (fragments_.empty())
        return {};
    const auto query = backend.embed(embedding_text(observation, context)).values;
    auto picked = rank(query, k);
    std::vector<std::uint64_t> ids;
    for (const auto& r : picked)
        ids.push_back(r.fragment.id);
    mark_used(ids, now);
    return picked;
}

void MemoryModule::mark_used(std::span<const std::uint64_t> ids, TaskIndex now) {
    for (auto id : ids) {
        auto it = std::find_if(fragments_.begin(), fragments_.end(), [id](const Fragment& f) { return f.id == id; });
        if (it == fragments_.end())
            continue; // evicted since it was retrieved
        ++it->use_count;
        it->last_used = std::max(it->last_used, now);
    }
}

double MemoryModule::utility(const Fragment& fragment, TaskIndex now) const {
    const bool stored =
        std::any_of(fragments_.begin(), fragments_.end(), [&](const Fragment& f) { return f.id == fragment.id; });
    if (stored)
        return fragment_utility(fragment, fragments_, now, weights_);
    std::vector<Fragment> pool = fragments_;
    pool.push_back(fragment);
    return fragment_utility(fragment, pool, now, weights_);
}

std::optional<std::size_t> MemoryModule::judged_victim(const std::vector<Fragment>& pool, Backend& judge) const {
    std::ostringstream prompt;
    prompt << "Role: memory-curator\n";
    prompt << "The memory is full. Pick the least useful entry to forget, weighing how often it was used, "
              "how recently, and how distinct it is from the others. Reply with its number only.\n";
    for (std::size_t i = 0; i < pool.size(); ++i)
        prompt << "[" << i << "] uses=" << pool[i].use_count << " last_used=" << pool[i].last_used
               << " observation: " << pool[i].observation << " | action: " << pool[i].action << "\n";
    CompletionRequest req;
    req.system_prompt = "You curate an agent's experience memory.";
    req.user_prompt = prompt.str();
    try {
        const std::string reply = judge.complete(req);
        std::size_t pos = reply.find_first_of("0123456789");
        if (pos == std::string::npos)
            return std::nullopt;
        std::size_t end = pos;
        while (end < reply.size() && std::isdigit(static_cast<unsigned char>(reply[end])))
            ++end;
        const auto index = std::stoull(reply.substr(pos, end - pos));
        if (index >= pool.size())
            return std::nullopt;
        return static_cast<std::size_t>(index);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::optional<Fragment> MemoryModule::insert_with_eviction(Fragment candidate, TaskIndex now, Backend* judge) {
    if (candidate.embedding.empty())
        throw Error(ErrorKind::InvalidConfiguration, "fragment has no embedding");
    for (auto& f : fragments_) {
        if (f.same_step(candidate)) {
            f.last_used = std::max(f.last_used, now);
            return std::nullopt;
        }
    }
    candidate.id = next_id_++;
    if (fragments_.size() < capacity_) {
        fragments_.push_back(std::move(candidate));
        return std::nullopt;
    }

    std::vector<Fragment> pool = fragments_;
    pool.push_back(std::move(candidate));

    std::optional<std::size_t> victim;
    if (eviction_ == EvictionMode::ModelJudged && judge)
        victim = judged_victim(pool, *judge);
    if (!victim) {
        // Lowest utility; ties go to the smaller id (the older fragment).
        std::size_t best = 0;
        double best_u = fragment_utility(pool[0], pool, now, weights_);
        for (std::size_t i = 1; i < pool.size(); ++i) {
            const double u = fragment_utility(pool[i], pool, now, weights_);
            if (u < best_u) {
                best = i;
                best_u = u;
            }
        }
        victim = best;
    }

    Fragment evicted = std::move(pool[*victim]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(*victim));
    fragments_ = std::move(pool);
    return evicted;
}

nlohmann::json MemoryModule::to_json() const {
    nlohmann::json frags = nlohmann::json::array();
    for (const auto& f : fragments_)
        frags.push_back({
            {"id", f.id},
            {"observation", f.observation},
            {"context", f.context},
            {"action", f.action},
            {"embedding", f.embedding},
            {"created_at", f.created_at},
            {"use_count", f.use_count},
            {"last_used", f.last_used},
        });
    return {
        {"role", to_string(role_)},
        {"capacity", capacity_},
        {"utility_weights", {weights_.frequency, weights_.recency, weights_.uniqueness}},
        {"eviction", eviction_ == EvictionMode::Utility ? "utility" : "model"},
        {"next_id", next_id_},
        {"fragments", std::move(frags)},
    };
}

MemoryModule MemoryModule::from_json(const nlohmann::json& doc) {
    try {
        const std::string role = doc.at("role").get<std::string>();
        if (role != "rou" && role != "exe")
            throw Error(ErrorKind::Schema, "unknown memory role '" + role + "'");
        const auto w = doc.at("utility_weights").get<std::vector<double>>();
        if (w.size() != 3)
            throw Error(ErrorKind::Schema, "utility_weights needs three entries");
        const std::string eviction = doc.value("eviction", "utility");
        MemoryModule module(role == "rou" ? MemoryRole::Router : MemoryRole::Executor,
                            doc.at("capacity").get<std::size_t>(), UtilityWeights{w[0], w[1], w[2]},
                            eviction == "model" ? EvictionMode::ModelJudged : EvictionMode::Utility);
        for (const auto& e : doc.at("fragments")) {
            Fragment f;
            f.id = e.at("id").get<std::uint64_t>();
            f.observation = e.at("observation").get<std::string>();
            f.context = e.at("context").get<std::string>();
            f.action = e.at("action").get<std::string>();
            f.embedding = e.at("embedding").get<std::vector<double>>();
            f.created_at = e.at("created_at").get<TaskIndex>();
            f.use_count = e.at("use_count").get<std::uint64_t>();
            f.last_used = e.at("last_used").get<TaskIndex>();
            module.fragments_.push_back(std::move(f));
        }
        if (module.fragments_.size() > module.capacity_)
            throw Error(ErrorKind::Schema, "memory dump exceeds its capacity");
        module.next_id_ = doc.at("next_id").get<std::uint64_t>();
        return module;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Schema, std::string("malformed memory dump: ") + e.what());
    }
}

} // namespace agentnet
