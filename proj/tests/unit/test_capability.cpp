// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "core/capability.hpp"
#include "core/error.hpp"
#include "core/scripted_backend.hpp"

using namespace agentnet;

namespace {

std::vector<AgentProfile> profiles(std::vector<std::vector<double>> caps) {
    std::vector<AgentProfile> out;
    for (std::size_t i = 0; i < caps.size(); ++i)
        out.push_back({static_cast<AgentId>(i), CapabilityVector{caps[i]}});
    return out;
}

} // namespace

TEST_CASE("initial agent is the best cosine match, ties to the lowest id") {
    TaskRequirement req{{1.0, 0.0, 0.0, 0.0}};
    auto agents = profiles({{0.5, 0.5, 0.5, 0.5}, {0.9, 0.1, 0.1, 0.1}, {0.9, 0.1, 0.1, 0.1}});
    CHECK(select_initial_agent(req, agents) == 1);

    auto uniform = profiles({{0.5, 0.5, 0.5, 0.5}, {0.5, 0.5, 0.5, 0.5}});
    CHECK(select_initial_agent(req, uniform) == 0);
    CHECK_THROWS_AS(select_initial_agent(req, std::vector<AgentProfile>{}), Error);
}

TEST_CASE("next agent skips excluded ids") {
    TaskRequirement req{{1.0, 0.0, 0.0, 0.0}};
    auto agents = profiles({{0.9, 0.1, 0.1, 0.1}, {0.8, 0.2, 0.1, 0.1}, {0.1, 0.9, 0.1, 0.1}});
    CHECK(select_next_agent(req, agents, {0}) == std::optional<AgentId>(1));
    CHECK(select_next_agent(req, agents, {0, 1}) == std::optional<AgentId>(2));
    CHECK_FALSE(select_next_agent(req, agents, {0, 1, 2}).has_value());
}

TEST_CASE("similarity of zero vectors is zero") {
    CHECK(similarity(TaskRequirement{{0, 0, 0, 0}}, CapabilityVector{{1, 1, 1, 1}}) == 0.0);
    CHECK(similarity(TaskRequirement{{1, 1, 0, 0}}, CapabilityVector{{2, 2, 0, 0}}) == doctest::Approx(1.0));
}

TEST_CASE("capability update and credit") {
    const CapabilityVector c{{0.5, 0.5, 0.5, 0.5}};
    const TaskRequirement req{{0.2, 0.9, 0.2, 0.5}};
    const auto executed = compute_delta(req, 1.0, TaskRole::Executed);
    CHECK(executed.values == req.values);
    CHECK(compute_delta(req, 0.0, TaskRole::Split).values == std::vector<double>(4, 0.0));
    CHECK(compute_delta(req, 1.0, TaskRole::ForwardedOnly).values == std::vector<double>(4, 0.0));

    const auto u = update_capability(c, executed, 0.8);
    CHECK(u.values[0] == doctest::Approx(0.44));
    CHECK(u.values[1] == doctest::Approx(0.58));
    CHECK(u.values[3] == doctest::Approx(0.5));

    const auto relay = update_capability(c, compute_delta(req, 1.0, TaskRole::ForwardedOnly), 0.8);
    CHECK(relay.values[0] == doctest::Approx(0.4));
    CHECK_THROWS_AS(update_capability(c, CapabilityVector{{1.0}}, 0.8), Error);
}

TEST_CASE("requirement replies are parsed and rescaled") {
    CHECK(parse_requirement_reply("(0.4, 0.9, 0.3, 0.4)", 4) == std::vector<double>{0.4, 0.9, 0.3, 0.4});
    CHECK(parse_requirement_reply("Scores: [2, 4, 0, -1] done", 4) == std::vector<double>{0.5, 1.0, 0.0, 0.0});
    CHECK_THROWS_AS(parse_requirement_reply("(0.1, 0.2)", 4), ExtractionError);
    CHECK_THROWS_AS(parse_requirement_reply("no numbers here", 4), ExtractionError);
    try {
        parse_requirement_reply("nothing", 4);
    } catch (const ExtractionError& e) {
        CHECK(e.raw_response() == "nothing");
    }
}

TEST_CASE("heuristic table lookup and json round trip") {
    HeuristicTable table({"reasoning", "language", "knowledge", "sequence"},
                         {{"navigate", {0.9, 0.2, 0.1, 0.7}}, {"snarks", {0.4, 0.9, 0.3, 0.1}}});
    CHECK(table.contains("navigate"));
    CHECK_FALSE(table.contains("ruin_names"));
    CHECK(table.lookup("snarks")[1] == 0.9);
    CHECK_THROWS_AS(table.lookup("ruin_names"), Error);
    const auto back = HeuristicTable::from_json(table.to_json());
    CHECK(back.categories() == table.categories());
    CHECK(back.lookup("navigate") == table.lookup("navigate"));
    CHECK_THROWS_AS(HeuristicTable({"a", "b"}, {{"x", {0.1}}}), Error);
    CHECK_THROWS_AS(HeuristicTable({"a", "b"}, {{"x", {0.1, 1.5}}}), Error);
}

TEST_CASE("extractor uses the table for known labels and the model otherwise") {
    HeuristicTable table(default_taxonomy(), {{"navigate", {0.9, 0.2, 0.1, 0.7}}});
    ScriptedBackend backend(Script::ordered({"(0.1, 0.2, 0.3, 0.4)"}));
    RequirementExtractor ex(default_taxonomy(), table, &backend);

    const auto atomic = ex.extract("walk", TaskMetadata{"navigate", 1});
    CHECK(atomic.source == RequirementSource::Atomic);
    CHECK(atomic.values == table.lookup("navigate"));
    CHECK(backend.completion_calls() == 0);

    const auto compound = ex.extract("something new", TaskMetadata{});
    CHECK(compound.source == RequirementSource::Compound);
    CHECK(compound.values == std::vector<double>{0.1, 0.2, 0.3, 0.4});
    CHECK(backend.completion_calls() == 1);
}
