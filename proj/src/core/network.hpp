// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <vector>

#include <json.hpp>

#include "capability.hpp"
#include "graph_topology.hpp"
#include "memory_store.hpp"
#include "types.hpp"

namespace agentnet {

struct NetworkConfig {
    std::size_t n_agents = 5;
    TopologyParams topology;
    CapabilityParams capability;
    std::size_t k = 3;
    std::size_t c_max = 40;
    UtilityWeights utility;
    EvictionMode eviction = EvictionMode::Utility;
    double initial_capability = 0.5;
    std::map<AgentId, CapabilityVector> capability_overrides;

    void validate() const;
};

/// One agent: a capability vector and the two private memories its router
/// and executor learn from.
class AgentNode {
public:
    AgentNode(AgentId id, CapabilityVector capability, MemoryModule router_memory, MemoryModule executor_memory);

    AgentId id() const noexcept { return id_; }
    const CapabilityVector& capability() const noexcept { return capability_; }
    const MemoryModule& router_memory() const noexcept { return router_memory_; }
    const MemoryModule& executor_memory() const noexcept { return executor_memory_; }
    const MemoryModule& memory(MemoryRole role) const noexcept {
        return role == MemoryRole::Router ? router_memory_ : executor_memory_;
    }

    MemoryModule& memory(MemoryRole role) noexcept {
        return role == MemoryRole::Router ? router_memory_ : executor_memory_;
    }
    void set_capability(CapabilityVector capability);

    bool operator==(const AgentNode&) const = default;

private:
    AgentId id_;
    CapabilityVector capability_;
    MemoryModule router_memory_;
    MemoryModule executor_memory_;
};

/// Agents plus the weighted graph between them, and the count of committed
/// tasks.
class Network {
public:
    explicit Network(NetworkConfig config);

    const NetworkConfig& config() const noexcept { return config_; }
    const Taxonomy& taxonomy() const noexcept { return config_.capability.taxonomy; }
    std::size_t size() const noexcept { return agents_.size(); }

    const TopologyGraph& graph() const noexcept { return graph_; }
    TopologyGraph& graph() noexcept { return graph_; }

    const AgentNode& agent(AgentId id) const;
    AgentNode& agent(AgentId id);
    const std::vector<AgentNode>& agents() const noexcept { return agents_; }

    std::vector<AgentProfile> profiles() const;

    TaskIndex task_index() const noexcept { return task_index_; }
    void advance_task_index() noexcept { ++task_index_; }

    GraphSnapshot snapshot() const { return take_snapshot(graph_, task_index_); }

    /// Full state: graph, capabilities, both memories of every agent.
    nlohmann::json state_to_json() const;
    static Network state_from_json(const nlohmann::json& doc, NetworkConfig config);

    /// One file per agent per role plus network.json.
    void save_state(const std::filesystem::path& dir) const;
    static Network load_state(const std::filesystem::path& dir, NetworkConfig config);

    bool operator==(const Network& other) const {
        return agents_ == other.agents_ && graph_.weights() == other.graph_.weights() &&
               graph_.edges() == other.graph_.edges() && task_index_ == other.task_index_;
    }

private:
    NetworkConfig config_;
    TopologyGraph graph_;
    std::vector<AgentNode> agents_;
    TaskIndex task_index_ = 0;
};

} // namespace agentnet
