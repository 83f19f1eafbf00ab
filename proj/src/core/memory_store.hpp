// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "types.hpp"

namespace agentnet {

class Backend;

enum class MemoryRole { Router, Executor };

const char* to_string(MemoryRole role) noexcept;

/// One local step an agent performed: what it saw, the context so far, and
/// what it did.
struct Fragment {
    std::uint64_t id = 0; // assigned by the owning module
    std::string observation;
    std::string context;
    std::string action;
    std::vector<double> embedding;
    TaskIndex created_at = 0;
    std::uint64_t use_count = 0;
    TaskIndex last_used = 0;

    bool same_step(const Fragment& other) const {
        return observation == other.observation && context == other.context && action == other.action;
    }
    bool operator==(const Fragment&) const = default;
};

/// Text that retrieval embeds for an (observation, context) pair.
std::string embedding_text(std::string_view observation, std::string_view context);

/// Builds a fragment with its embedding computed once through the backend.
Fragment make_fragment(Backend& backend, std::string observation, std::string context, std::string action,
                       TaskIndex now);

struct UtilityWeights {
    double frequency = 1.0 / 3.0;
    double recency = 1.0 / 3.0;
    double uniqueness = 1.0 / 3.0;

    void validate() const;
    bool operator==(const UtilityWeights&) const = default;
};

/// Weighted blend of usage frequency, recency and distinctness, in [0,1]:
///   freq = use_count / (1 + max use_count in pool)
///   rec  = 1 / (1 + now - last_used)
///   uniq = 1 - max cosine to any other pool member (1 when alone), clamped to [0,1]
double fragment_utility(const Fragment& fragment, std::span<const Fragment> pool, TaskIndex now,
                        const UtilityWeights& weights = {});

enum class EvictionMode { Utility, ModelJudged };

struct RetrievedFragment {
    Fragment fragment;
    double similarity = 0.0;
};

/// Capacity-bounded store of fragments for one role of one agent. Nothing
/// outside the owning agent ever holds a reference into it.
class MemoryModule {
public:
    MemoryModule(MemoryRole role, std::size_t capacity, UtilityWeights weights = {},
                 EvictionMode eviction = EvictionMode::Utility);

    MemoryRole role() const noexcept { return role_; }
    std::size_t capacity() const noexcept { return capacity_; }
    std::size_t size() const noexcept { return fragments_.size(); }
    bool empty() const noexcept { return fragments_.empty(); }
    const std::vector<Fragment>& fragments() const noexcept { return fragments_; }
    const UtilityWeights& weights() const noexcept { return weights_; }

    /// Top-k by cosine to the query embedding, descending; ties keep the
    /// older fragment first. Does not touch usage statistics.
    std::vector<RetrievedFragment> rank(std::span<const double> query, std::size_t k) const;

    /// Embeds observation + context, ranks, and records the use of every
    /// returned fragment at time `now`.
    std::vector<RetrievedFragment> select_fragments(Backend& backend, std::string_view observation,
                                                    std::string_view context, std::size_t k, TaskIndex now);

    void mark_used(std::span<const std::uint64_t> ids, TaskIndex now);

    /// Appends below capacity. At capacity the minimum-utility member of
    /// stored + candidate is dropped and returned (possibly the candidate).
    /// A step identical to a stored one only refreshes that copy.
    /// `judge` is consulted in model-judged mode; any failure there falls
    /// back to the utility rule.
    std::optional<Fragment> insert_with_eviction(Fragment candidate, TaskIndex now, Backend* judge = nullptr);

    double utility(const Fragment& fragment, TaskIndex now) const;

    nlohmann::json to_json() const;
    static MemoryModule from_json(const nlohmann::json& doc);

    bool operator==(const MemoryModule&) const = default;

private:
    std::optional<std::size_t> judged_victim(const std::vector<Fragment>& pool, Backend& judge) const;

    MemoryRole role_;
    std::size_t capacity_;
    UtilityWeights weights_;
    EvictionMode eviction_;
    std::vector<Fragment> fragments_;
    std::uint64_t next_id_ = 0;
};

} // namespace agentnet
