// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "core/protocol.hpp"
#include "core/runtime.hpp"
#include "core/scripted_backend.hpp"

using namespace agentnet;

namespace {

NetworkConfig small(std::size_t n) {
    NetworkConfig cfg;
    cfg.n_agents = n;
    cfg.topology.alpha = 0.8;
    cfg.capability.beta = 0.8;
    return cfg;
}

Task task(std::string id) {
    Task t;
    t.id = std::move(id);
    t.observation = "Which sentence has the correct adjective order?";
    t.requirement.values = {0.2, 0.9, 0.2, 0.5};
    return t;
}

} // namespace

TEST_CASE("action grammar") {
    CHECK(parse_action("EXECUTE") == RoutingAction::execute());
    CHECK(parse_action("  \n**FORWARD 3**") == RoutingAction::forward(3));
    CHECK(parse_action("forward agent 2") == RoutingAction::forward(2));
    CHECK(parse_action("FORWARD next") == RoutingAction::forward());
    CHECK(parse_action("FORWARD") == RoutingAction::forward());
    const auto split = parse_action("SPLIT\nLOCAL: a\ncontinued\nDELEGATE: b\nDELEGATE: c");
    REQUIRE(split);
    CHECK(split->local_subtasks == std::vector<std::string>{"a\ncontinued"});
    CHECK(split->delegated_subtasks == std::vector<std::string>{"b", "c"});
    CHECK_FALSE(parse_action("EXECUTE now"));
    CHECK_FALSE(parse_action("SPLIT"));
    CHECK_FALSE(parse_action("FORWARD to someone"));
    CHECK_FALSE(parse_action(""));
    for (const auto& a : {RoutingAction::execute(), RoutingAction::forward(4), RoutingAction::forward(),
                          RoutingAction::split({"x"}, {"y", "z"})})
        CHECK(parse_action(render_action(a)) == a);
}

TEST_CASE("forward chain, then forced execute on a revisit") {
    ScriptedBackend backend(Script::ordered({"think", "FORWARD 1", "think", "FORWARD 0", "work", "(A)"}));
    Network net(small(3));
    const Network before = net;
    Runtime rt(net, backend);
    auto out = rt.run_task(task("t1"));
    CHECK(out.answer == "(A)");
    CHECK(out.trace.entry_agent == 0);
    CHECK(out.trace.visited == std::vector<AgentId>{0, 1});
    CHECK(out.trace.handoffs == std::vector<Edge>{{0, 1}});
    CHECK(out.trace.roles.at(0) == TaskRole::ForwardedOnly);
    CHECK(out.trace.roles.at(1) == TaskRole::Executed);
    CHECK(net == before); // running never learns

    rt.commit_task(out.trace, 0.0);
    CHECK(net.graph().weight(0, 1) == doctest::Approx(0.8));
    CHECK(net.graph().weight(1, 0) == 1.0);
    CHECK(net.agent(0).capability().values == std::vector<double>(4, 0.4));
    CHECK(net.agent(1).capability().values[1] == doctest::Approx(0.4));
    CHECK(net.task_index() == 1);
    // failed tasks leave memories empty
    CHECK(net.agent(1).executor_memory().empty());
}

TEST_CASE("successful commit stores fragments and credits contributors") {
    ScriptedBackend backend(Script::ordered({"think", "FORWARD 2", "think", "EXECUTE", "work", "42"}));
    Network net(small(3));
    Runtime rt(net, backend);
    auto out = rt.run_task(task("t2"));
    CHECK(out.trace.visited == std::vector<AgentId>{0, 2});
    rt.commit_task(out.trace, 1.0);
    CHECK(net.graph().weight(0, 2) == 1.0);
    CHECK(net.agent(2).capability().values[1] == doctest::Approx(0.58));
    CHECK(net.agent(0).router_memory().size() == 1);
    CHECK(net.agent(2).executor_memory().size() == 1);
    CHECK(net.agent(1).router_memory().empty());
    CHECK(out.trace.commit.is_object());
}

TEST_CASE("a single agent executes directly") {
    ScriptedBackend backend(Script::ordered({"think", "FORWARD 0", "work", "done"}));
    Network net(small(1));
    Runtime rt(net, backend);
    auto out = rt.run_task(task("solo"));
    CHECK(out.answer == "done");
    CHECK(out.trace.visited == std::vector<AgentId>{0});
    CHECK(out.trace.handoffs.empty());
}

TEST_CASE("unparseable router replies fall back to execute") {
    Script script;
    script.kind = Script::Kind::Rules;
    script.rules = {{"Role: router", false, "I am not sure."}, {"Role: executor", false, "42"}};
    ScriptedBackend backend(script);
    Network net(small(3));
    Runtime rt(net, backend);
    auto out = rt.run_task(task("t3"));
    CHECK(out.answer == "42");
    CHECK(out.trace.visited == std::vector<AgentId>{0});
}

TEST_CASE("split keeps local work and delegates the rest") {
    ScriptedBackend backend(Script::ordered(
        {"think", "SPLIT\nLOCAL: first half\nDELEGATE: second half", "work", "part one", "think", "EXECUTE", "work",
         "part two", "work", "final"}));
    Network net(small(3));
    Runtime rt(net, backend);
    auto out = rt.run_task(task("t4"));
    CHECK(out.trace.roles.at(0) == TaskRole::Split);
    CHECK(out.trace.visited.size() == 2);
    CHECK(out.trace.context.size() >= 2);
    CHECK(out.trace.context[0].agent == 0);
    CHECK(out.trace.context[0].text == "part one");
}

TEST_CASE("context is append-only") {
    TaskState s;
    s = append_context(s, 0, "a");
    const auto first = s.context;
    s = append_context(s, 3, "b");
    CHECK(s.context.size() == 2);
    CHECK(s.context[0] == first[0]);
    CHECK(s.context[1] == ContextEntry{3, "b"});
    CHECK(render_context(s.context).find("b") != std::string::npos);
}
