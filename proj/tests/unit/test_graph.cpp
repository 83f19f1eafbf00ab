// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "core/error.hpp"
#include "core/graph_topology.hpp"

using namespace agentnet;

TEST_CASE("fully connected graph starts at w0 with every ordered pair") {
    auto g = TopologyGraph::fully_connected(4);
    CHECK(g.weights().size() == 12);
    CHECK(g.edges().size() == 12);
    for (const auto& [e, w] : g.weights()) {
        CHECK(e.first != e.second);
        CHECK(w == 1.0);
    }
    CHECK(g.out_neighbors(2) == std::vector<AgentId>{0, 1, 3});
}

TEST_CASE("edge update follows the moving average") {
    auto g = TopologyGraph::fully_connected(3, {0.8, 0.5, 1.0});
    CHECK(g.update_edge_weight(0, 1, 0.0) == doctest::Approx(0.8));
    CHECK(g.update_edge_weight(0, 1, 0.0) == doctest::Approx(0.64));
    CHECK(g.update_edge_weight(0, 1, 1.0) == doctest::Approx(0.712));
    CHECK(g.weight(1, 0) == 1.0);
}

TEST_CASE("pruning is strict and keeps weights") {
    auto g = TopologyGraph::fully_connected(3, {0.8, 0.5, 1.0});
    g.set_weight(0, 1, 0.5);
    g.set_weight(0, 2, 0.50001);
    g.prune_edges();
    CHECK_FALSE(g.edges().count({0, 1}));
    CHECK(g.edges().count({0, 2}));
    CHECK(g.weight(0, 1) == 0.5);
    CHECK(g.out_neighbors(0) == std::vector<AgentId>{2});

    // a pruned pair can come back once its weight recovers
    g.set_weight(0, 1, 0.9);
    g.prune_edges();
    CHECK(g.edges().count({0, 1}));
}

TEST_CASE("invalid graph operations are rejected") {
    auto g = TopologyGraph::fully_connected(3);
    CHECK_THROWS_AS(g.update_edge_weight(1, 1, 1.0), Error);
    CHECK_THROWS_AS(g.update_edge_weight(0, 7, 1.0), Error);
    CHECK_THROWS_AS(g.update_edge_weight(0, 1, 1.5), Error);
    CHECK_THROWS_AS(TopologyGraph::fully_connected(0), Error);
    CHECK_THROWS_AS(TopologyGraph::fully_connected(3, {1.5, 0.5, 1.0}), Error);
}

TEST_CASE("snapshot round trip and restore") {
    auto g = TopologyGraph::fully_connected(3, {0.8, 0.5, 1.0});
    g.update_edge_weight(0, 1, 0.0);
    g.update_edge_weight(0, 1, 0.0);
    g.update_edge_weight(0, 1, 0.0);
    g.update_edge_weight(0, 1, 0.0);
    g.prune_edges();
    const auto snap = take_snapshot(g, 4);
    CHECK(snap.weights.at({0, 1}) == doctest::Approx(0.4096));
    CHECK_FALSE(snap.edges.count({0, 1}));

    const auto text = serialize_snapshot(snap);
    CHECK(text.back() == '\n');
    const auto back = parse_snapshot(text);
    CHECK(back == snap);
    CHECK(serialize_snapshot(back) == text);

    const auto restored = restore_graph(back, g.params());
    CHECK(restored.weights() == g.weights());
    CHECK(restored.edges() == g.edges());
}

TEST_CASE("snapshot parsing reports malformed input") {
    CHECK_THROWS_AS(parse_snapshot("{"), Error);
    CHECK_THROWS_AS(parse_snapshot(R"({"task_index": 0})"), Error);
}

TEST_CASE("dot export") {
    auto g = TopologyGraph::fully_connected(2, {0.5, 0.5, 1.0});
    g.update_edge_weight(0, 1, 0.0);
    g.prune_edges();
    const auto snap = take_snapshot(g, 1);
    const auto dot = snapshot_to_dot(snap);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("a1 -> a0") != std::string::npos);
    CHECK(dot.find("a0 -> a1") == std::string::npos);
    const auto all = snapshot_to_dot(snap, true);
    CHECK(all.find("a0 -> a1") != std::string::npos);
    CHECK(all.find("dashed") != std::string::npos);
}
