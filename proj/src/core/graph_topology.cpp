// SPDX-License-Identifier: Apache-2.0
#include "graph_topology.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "error.hpp"

namespace agentnet {

namespace {

bool in_unit_interval(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

} // namespace

void TopologyParams::validate() const {
    if (!in_unit_interval(alpha))
        throw Error(ErrorKind::InvalidConfiguration, "alpha must lie in [0,1]");
    if (!std::isfinite(theta_w) || theta_w < 0.0)
        throw Error(ErrorKind::InvalidConfiguration, "theta_w must be >= 0");
    if (!in_unit_interval(w0))
        throw Error(ErrorKind::InvalidConfiguration, "w0 must lie in [0,1]");
}

TopologyGraph::TopologyGraph(std::size_t n_agents, TopologyParams params)
    : n_agents_(n_agents), params_(params) {}

TopologyGraph TopologyGraph::fully_connected(std::size_t n_agents, TopologyParams params) {
    if (n_agents == 0)
        throw Error(ErrorKind::InvalidConfiguration, "network needs at least one agent");
    params.validate();
    TopologyGraph graph(n_agents, params);
    for (AgentId i = 0; i < n_agents; ++i)
        for (AgentId j = 0; j < n_agents; ++j)
            if (i != j)
                graph.weights_.emplace(Edge{i, j}, params.w0);
    graph.prune_edges();
    return graph;
}

void TopologyGraph::check_agent(AgentId agent) const {
    if (agent >= n_agents_)
        throw Error(ErrorKind::MissingAgent, "unknown agent " + std::to_string(agent));
}

void TopologyGraph::check_pair(AgentId from, AgentId to) const {
    if (from == to)
        throw Error(ErrorKind::SelfLoop, "self-loop on agent " + std::to_string(from));
    check_agent(from);
    check_agent(to);
}

double TopologyGraph::weight(AgentId from, AgentId to) const {
    check_pair(from, to);
    return weights_.at({from, to});
}

double TopologyGraph::update_edge_weight(AgentId from, AgentId to, double success) {
    check_pair(from, to);
    if (!in_unit_interval(success))
        throw Error(ErrorKind::OutOfRange, "success metric must lie in [0,1]");
    double& w = weights_.at({from, to});
    w = params_.alpha * w + (1.0 - params_.alpha) * success;
    return w;
}

const EdgeSet& TopologyGraph::prune_edges() {
    EdgeSet kept;
    for (const auto& [edge, w] : weights_)
        if (w > params_.theta_w)
            kept.insert(kept.end(), edge);
    edges_ = std::move(kept);
    return edges_;
}

std::vector<AgentId> TopologyGraph::out_neighbors(AgentId agent) const {
    check_agent(agent);
    std::vector<AgentId> out;
    for (auto it = edges_.lower_bound({agent, 0}); it != edges_.end() && it->first == agent; ++it)
        out.push_back(it->second);
    return out;
}

void TopologyGraph::set_weight(AgentId from, AgentId to, double w) {
    check_pair(from, to);
    if (!in_unit_interval(w))
        throw Error(ErrorKind::OutOfRange, "weight must lie in [0,1]");
    weights_.at({from, to}) = w;
}

void TopologyGraph::set_theta_w(double theta_w) {
    TopologyParams next = params_;
    next.theta_w = theta_w;
    next.validate();
    params_ = next;
}

GraphSnapshot take_snapshot(const TopologyGraph& graph, TaskIndex task_index) {
    GraphSnapshot snap;
    snap.task_index = task_index;
    for (AgentId i = 0; i < graph.agent_count(); ++i)
        snap.agents.push_back(i);
    snap.weights = graph.weights();
    snap.edges = graph.edges();
    return snap;
}

nlohmann::json snapshot_to_json(const GraphSnapshot& snapshot) {
    nlohmann::json weights = nlohmann::json::array();
    for (const auto& [edge, w] : snapshot.weights)
        weights.push_back({{"from", edge.first}, {"to", edge.second}, {"w", w}});
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& edge : snapshot.edges)
        edges.push_back({{"from", edge.first}, {"to", edge.second}});
    return {
        {"task_index", snapshot.task_index},
        {"agents", snapshot.agents},
        {"weights", std::move(weights)},
        {"edges", std::move(edges)},
    };
}

GraphSnapshot snapshot_from_json(const nlohmann::json& doc) {
    try {
        GraphSnapshot snap;
        snap.task_index = doc.at("task_index").get<TaskIndex>();
        snap.agents = doc.at("agents").get<std::vector<AgentId>>();
        for (const auto& entry : doc.at("weights")) {
            Edge edge{entry.at("from").get<AgentId>(), entry.at("to").get<AgentId>()};
            if (edge.first == edge.second)
                throw Error(ErrorKind::Schema, "snapshot contains a self-loop weight");
            snap.weights[edge] = entry.at("w").get<double>();
        }
        for (const auto& entry : doc.at("edges"))
            snap.edges.emplace(entry.at("from").get<AgentId>(), entry.at("to").get<AgentId>());
        return snap;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Schema, std::string("malformed snapshot: ") + e.what());
    }
}

std::string serialize_snapshot(const GraphSnapshot& snapshot) {
    return snapshot_to_json(snapshot).dump(2) + "\n";
}

GraphSnapshot parse_snapshot(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Parse, std::string("snapshot parse error: ") + e.what());
    }
    return snapshot_from_json(doc);
}

TopologyGraph restore_graph(const GraphSnapshot& snapshot, TopologyParams params) {
    TopologyGraph graph = TopologyGraph::fully_connected(snapshot.agents.size(), params);
    for (const auto& [edge, w] : snapshot.weights)
        graph.set_weight(edge.first, edge.second, w);
    for (const auto& edge : snapshot.edges)
        graph.check_pair(edge.first, edge.second);
    graph.edges_ = snapshot.edges;
    return graph;
}

std::string snapshot_to_dot(const GraphSnapshot& snapshot, bool include_pruned) {
    std::ostringstream out;
    out << "digraph agentnet {\n";
    out << "  label=\"task " << snapshot.task_index << "\";\n";
    out << "  node [shape=circle];\n";
    for (AgentId id : snapshot.agents)
        out << "  a" << id << " [label=\"Agent " << id << "\"];\n";
    out << std::fixed << std::setprecision(2);
    for (const auto& [edge, w] : snapshot.weights) {
        const bool live = snapshot.edges.contains(edge);
        if (!live && !include_pruned)
            continue;
        out << "  a" << edge.first << " -> a" << edge.second << " [label=\"" << w << "\"";
        if (!live)
            out << ", style=dashed";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace agentnet
