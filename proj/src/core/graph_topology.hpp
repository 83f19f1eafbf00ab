// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "types.hpp"

namespace agentnet {

struct TopologyParams {
    double alpha = 0.8;   // EMA decay: weight kept from history
    double theta_w = 0.5; // edges with weight <= theta_w are pruned
    double w0 = 1.0;

    void validate() const;
};

struct GraphSnapshot;

using WeightMatrix = std::map<Edge, double>;
using EdgeSet = std::set<Edge>;

/// Weighted directed graph over agents 0..n-1.
///
/// Weights are kept for every ordered pair; the edge set holds the pairs that
/// survived the last prune and is what routing consults. Mutations happen
/// only in the commit phase between tasks; concurrent const access is safe as
/// long as no mutation overlaps it.
class TopologyGraph {
public:
    static TopologyGraph fully_connected(std::size_t n_agents, TopologyParams params = {});

    std::size_t agent_count() const noexcept { return n_agents_; }
    const TopologyParams& params() const noexcept { return params_; }
    const WeightMatrix& weights() const noexcept { return weights_; }
    const EdgeSet& edges() const noexcept { return edges_; }

    double weight(AgentId from, AgentId to) const;

    /// weight <- alpha * weight + (1 - alpha) * success. Returns the new weight.
    double update_edge_weight(AgentId from, AgentId to, double success);

    /// Replaces the edge set with every pair whose weight exceeds theta_w.
    const EdgeSet& prune_edges();

    /// Sorted targets of the current edge set.
    std::vector<AgentId> out_neighbors(AgentId agent) const;

    /// Direct weight assignment, for seeding experiments and tests.
    void set_weight(AgentId from, AgentId to, double w);

    void set_theta_w(double theta_w);

private:
    TopologyGraph(std::size_t n_agents, TopologyParams params);
    void check_pair(AgentId from, AgentId to) const;
    void check_agent(AgentId agent) const;

    std::size_t n_agents_ = 0;
    TopologyParams params_;
    WeightMatrix weights_;
    EdgeSet edges_;

    friend TopologyGraph restore_graph(const GraphSnapshot&, TopologyParams);
};

/// Serialized graph state at one point of a run.
struct GraphSnapshot {
    TaskIndex task_index = 0;
    std::vector<AgentId> agents;
    WeightMatrix weights;
    EdgeSet edges;

    bool operator==(const GraphSnapshot&) const = default;
};

GraphSnapshot take_snapshot(const TopologyGraph& graph, TaskIndex task_index);

nlohmann::json snapshot_to_json(const GraphSnapshot& snapshot);
GraphSnapshot snapshot_from_json(const nlohmann::json& doc);

/// Pretty-printed JSON document, newline terminated.
std::string serialize_snapshot(const GraphSnapshot& snapshot);
GraphSnapshot parse_snapshot(std::string_view text);

/// Rebuilds a graph whose weights and edge set match the snapshot.
TopologyGraph restore_graph(const GraphSnapshot& snapshot, TopologyParams params);

/// Graphviz digraph with one node per agent and weight-labelled arcs.
/// Pruned pairs are drawn dashed when include_pruned is set.
std::string snapshot_to_dot(const GraphSnapshot& snapshot, bool include_pruned = false);

} // namespace agentnet
