// SPDX-License-Identifier: Apache-2.0
#include "runtime.hpp"

#include <algorithm>
#include <set>

#include "error.hpp"

namespace agentnet {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

bool aborts_task(const Error& e) {
    return e.kind() == ErrorKind::Backend || e.kind() == ErrorKind::ScriptUnderrun;
}

std::string step_observation(const Task& task, const std::optional<std::string>& subtask) {
    return subtask ? task.observation + "\nSubtask: " + *subtask : task.observation;
}

nlohmann::json edge_json(const Edge& e) { return {{"from", e.first}, {"to", e.second}}; }

} // namespace

bool TaskState::has_visited(AgentId id) const {
    return std::find(visited.begin(), visited.end(), id) != visited.end();
}

TaskState append_context(TaskState state, AgentId agent, std::string result) {
    if (result.empty())
        throw Error(ErrorKind::InvalidConfiguration, "context entries must be non-empty");
    state.context.push_back({agent, std::move(result)});
    return state;
}

nlohmann::json TaskTrace::to_json() const {
    nlohmann::json steps_json = nlohmann::json::array();
    for (const auto& s : steps)
        steps_json.push_back({{"agent", s.agent},
                              {"memory", to_string(s.role)},
                              {"observation", s.observation},
                              {"context", s.context},
                              {"action", s.action}});
    nlohmann::json roles_json = nlohmann::json::object();
    for (const auto& [id, role] : roles)
        roles_json[std::to_string(id)] = to_string(role);
    nlohmann::json ctx = nlohmann::json::array();
    for (const auto& e : context)
        ctx.push_back({{"agent", e.agent}, {"text", e.text}});
    nlohmann::json handoff_json = nlohmann::json::array();
    for (const auto& h : handoffs)
        handoff_json.push_back(edge_json(h));
    return {
        {"task_id", task_id},
        {"task_index", task_index},
        {"requirement", requirement.values},
        {"entry", {{"agent", entry_agent}, {"similarities", entry_similarities}}},
        {"events", events},
        {"visited", visited},
        {"handoffs", std::move(handoff_json)},
        {"roles", std::move(roles_json)},
        {"steps", std::move(steps_json)},
        {"context", std::move(ctx)},
        {"final_answer", final_answer},
        {"aborted", aborted},
        {"error", error},
        {"commit", commit},
    };
}

Runtime::Runtime(Network& network, Backend& backend, const RequirementExtractor* extractor,
                 RoutingInterceptor* interceptor)
    : network_(network), backend_(backend), extractor_(extractor), interceptor_(interceptor) {}

std::vector<AgentId> Runtime::routing_candidates(AgentId holder, const TaskState& state) const {
    std::vector<AgentId> out;
    for (AgentId id : network_.graph().out_neighbors(holder))
        if (!state.has_visited(id))
            out.push_back(id);
    if (!out.empty())
        return out;
    for (AgentId id = 0; id < network_.size(); ++id)
        if (id != holder && !state.has_visited(id))
            out.push_back(id);
    return out;
}

RoutingContext Runtime::routing_context(AgentId holder, const TaskState& state, bool delegated) const {
    RoutingContext ctx;
    ctx.holder = holder;
    ctx.state = &state;
    ctx.candidates = routing_candidates(holder, state);
    for (AgentId id = 0; id < network_.size(); ++id)
        if (id != holder && !state.has_visited(id))
            ctx.unvisited.push_back(id);
    ctx.delegated_subtask = delegated;
    return ctx;
}

std::optional<AgentId> Runtime::best_candidate(const TaskRequirement& req,
                                               const std::vector<AgentId>& candidates) const {
    std::vector<AgentProfile> profiles;
    for (AgentId id : candidates)
        profiles.push_back({id, network_.agent(id).capability()});
    return select_next_agent(req, profiles, {});
}

PromptInput Runtime::prompt_input(AgentId holder, AgentId memory_owner, MemoryRole role, const TaskState& state,
                                  const std::optional<std::string>& subtask, const TaskRequirement& requirement,
                                  bool with_candidates, TaskTrace& trace) {
    PromptInput in;
    in.holder = holder;
    in.router = memory_owner;
    in.taxonomy = &network_.taxonomy();
    in.capability = network_.agent(holder).capability();
    in.observation = state.task.observation;
    in.subtask = subtask;
    in.requirement = requirement;
    in.context = &state.context;
    if (with_candidates)
        for (AgentId id : routing_candidates(holder, state))
            in.candidates.push_back({id, network_.agent(id).capability()});

    const MemoryModule& memory = network_.agent(memory_owner).memory(role);
    if (!memory.empty()) {
        const std::string context_text = render_context(state.context);
        const auto query = backend_.embed(embedding_text(step_observation(state.task, subtask), context_text)).values;
        in.memory = memory.rank(query, network_.config().k);
        Retrieval r{memory_owner, role, {}};
        for (const auto& f : in.memory)
            r.fragment_ids.push_back(f.fragment.id);
        trace.retrievals.push_back(r);
    }
    return in;
}

RoutingAction Runtime::route_step(AgentId holder, const TaskState& state, const std::optional<std::string>& subtask,
                                  const TaskRequirement& requirement, TaskTrace& trace) {
    const AgentId router = interceptor_ ? interceptor_->router_for(holder) : holder;
    network_.agent(router); // validates the id

    PromptInput in = prompt_input(holder, router, MemoryRole::Router, state, subtask, requirement, true, trace);
    nlohmann::json event = {{"type", "route"}, {"holder", holder}, {"router", router}};
    if (subtask)
        event["subtask"] = *subtask;
    nlohmann::json retrieved = nlohmann::json::array();
    for (const auto& f : in.memory)
        retrieved.push_back(f.fragment.id);
    event["retrieved"] = std::move(retrieved);
    nlohmann::json notes = nlohmann::json::array();

    CompletionRequest req;
    req.system_prompt = router_system_prompt(router);
    req.user_prompt = router_prompt(in, PromptStage::Reason);
    const std::string reasoning = backend_.complete(req);
    req.user_prompt = router_prompt(in, PromptStage::Act, reasoning);
    std::string reply = backend_.complete(req);
    auto parsed = parse_action(reply);
    if (!parsed) {
        notes.push_back("malformed action, retrying");
        reply = backend_.complete(req);
        parsed = parse_action(reply);
    }
    if (!parsed)
        notes.push_back("malformed action after retry, executing");
    event["reasoning"] = reasoning;
    event["reply"] = reply;

    const RoutingAction proposed = parsed.value_or(RoutingAction::execute());
    RoutingAction action = proposed;
    const RoutingContext ctx = routing_context(holder, state, subtask.has_value());
    if (interceptor_) {
        action = interceptor_->intercept(ctx, proposed);
        if (action != proposed)
            notes.push_back("decision overridden: " + render_action(proposed) + " -> " + render_action(action));
    }

    if (action.kind == RoutingAction::Kind::Split && subtask) {
        notes.push_back("delegated subtasks are not split again, executing");
        action = RoutingAction::execute();
    }
    if (action.kind == RoutingAction::Kind::Split &&
        action.local_subtasks.empty() && action.delegated_subtasks.empty()) {
        notes.push_back("split without subtasks, executing");
        action = RoutingAction::execute();
    }

    if (action.kind == RoutingAction::Kind::Forward) {
        const bool chosen_by_model = action == proposed;
        std::optional<AgentId> target = action.target;
        if (target && (*target == holder || (*target < network_.size() && state.has_visited(*target)))) {
            notes.push_back("target " + std::to_string(*target) + " already visited, executing");
            target.reset();
            action = RoutingAction::execute();
        } else {
            const bool valid = target && *target < network_.size() &&
                               (chosen_by_model ? std::find(ctx.candidates.begin(), ctx.candidates.end(), *target) !=
                                                      ctx.candidates.end()
                                                : !state.has_visited(*target));
            if (target && !valid)
                notes.push_back("target " + std::to_string(*target) + " is not a routing candidate");
            if (!valid)
                target = best_candidate(requirement, ctx.candidates);
            if (target) {
                action = RoutingAction::forward(*target);
            } else {
                notes.push_back("no unvisited agent left, executing");
                action = RoutingAction::execute();
            }
        }
    }

    event["decision"] = parsed ? render_action(*parsed) : std::string("(malformed)");
    event["action"] = to_string(action.kind);
    if (action.kind == RoutingAction::Kind::Forward)
        event["target"] = *action.target;
    event["notes"] = std::move(notes);
    trace.events.push_back(std::move(event));

    trace.steps.push_back(
        {router, MemoryRole::Router, step_observation(state.task, subtask), render_context(state.context),
         render_action(action)});
    return action;
}

std::string Runtime::execute_step(AgentId holder, const TaskState& state, const std::optional<std::string>& subtask,
                                  const TaskRequirement& requirement, TaskTrace& trace) {
    PromptInput in = prompt_input(holder, holder, MemoryRole::Executor, state, subtask, requirement, false, trace);
    CompletionRequest req;
    req.system_prompt = executor_system_prompt(holder);
    req.user_prompt = executor_prompt(in, PromptStage::Reason);
    const std::string reasoning = backend_.complete(req);
    req.user_prompt = executor_prompt(in, PromptStage::Act, reasoning);
    std::string result = trim(backend_.complete(req));
    if (result.empty())
        result = "(no answer)";

    nlohmann::json retrieved = nlohmann::json::array();
    for (const auto& f : in.memory)
        retrieved.push_back(f.fragment.id);
    nlohmann::json event = {{"type", "execute"}, {"holder", holder}, {"retrieved", std::move(retrieved)},
                            {"reasoning", reasoning}, {"result", result}};
    if (subtask)
        event["subtask"] = *subtask;
    trace.events.push_back(std::move(event));

    trace.steps.push_back({holder, MemoryRole::Executor, step_observation(state.task, subtask),
                           render_context(state.context), result});
    return result;
}

void Runtime::record_context(TaskState& state, AgentId agent, std::string result, TaskTrace& trace) {
    state = append_context(std::move(state), agent, std::move(result));
    trace.events.push_back({{"type", "context"},
                            {"agent", agent},
                            {"appended", state.context.back().text},
                            {"length", state.context.size()}});
}

void Runtime::credit(TaskTrace& trace, AgentId agent, TaskRole role, const TaskRequirement& req) {
    auto it = trace.roles.find(agent);
    if (it == trace.roles.end() || it->second == TaskRole::ForwardedOnly) {
        trace.roles[agent] = role;
        if (role != TaskRole::ForwardedOnly)
            trace.credited[agent] = req;
    }
}

TaskRequirement Runtime::subtask_requirement(const std::string& subtask, const TaskRequirement& parent,
                                             TaskTrace& trace) {
    if (!extractor_)
        return parent;
    try {
        return extractor_->extract(subtask, {}, ExtractionMode::Compound);
    } catch (const ExtractionError& e) {
        trace.events.push_back({{"type", "note"},
                                {"text", std::string("subtask requirement unparseable, using the parent's: ") +
                                             e.what()}});
        return parent;
    }
}

void Runtime::run_split(AgentId holder, const RoutingAction& action, TaskState& state, TaskTrace& trace) {
    credit(trace, holder, TaskRole::Split, state.task.requirement);
    trace.events.push_back({{"type", "split"},
                            {"holder", holder},
                            {"local", action.local_subtasks},
                            {"delegated", action.delegated_subtasks}});
    // Only results enter the context; the decomposition itself stays with this agent.
    for (const auto& sub : action.local_subtasks) {
        std::string result = execute_step(holder, state, sub, state.task.requirement, trace);
        record_context(state, holder, std::move(result), trace);
    }
    for (const auto& sub : action.delegated_subtasks)
        run_delegated(holder, sub, state, trace);
    state.finished = true;
}

void Runtime::run_delegated(AgentId from, const std::string& subtask, TaskState& state, TaskTrace& trace) {
    const TaskRequirement req = subtask_requirement(subtask, state.task.requirement, trace);
    const RoutingContext ctx = routing_context(from, state, true);
    std::optional<AgentId> target = best_candidate(req, ctx.candidates);
    if (interceptor_) {
        auto chosen = interceptor_->delegate_target(ctx, target);
        if (chosen && *chosen != from && *chosen < network_.size() && !state.has_visited(*chosen))
            target = chosen;
    }
    trace.events.push_back({{"type", "delegate"},
                            {"from", from},
                            {"subtask", subtask},
                            {"requirement", req.values},
                            {"target", target ? nlohmann::json(*target) : nlohmann::json(nullptr)}});
    if (!target) {
        std::string result = execute_step(from, state, subtask, req, trace);
        record_context(state, from, std::move(result), trace);
        return;
    }

    trace.handoffs.push_back({from, *target});
    AgentId at = *target;
    while (true) {
        state.visited.push_back(at);
        credit(trace, at, TaskRole::ForwardedOnly, req);
        trace.events.push_back({{"type", "visit"}, {"agent", at}, {"hop", state.visited.size() - 1}});
        const RoutingAction action = route_step(at, state, subtask, req, trace);
        if (action.kind == RoutingAction::Kind::Forward) {
            trace.handoffs.push_back({at, *action.target});
            at = *action.target;
            continue;
        }
        credit(trace, at, TaskRole::Executed, req);
        std::string result = execute_step(at, state, subtask, req, trace);
        record_context(state, at, std::move(result), trace);
        return;
    }
}

TaskOutcome Runtime::run_task(const Task& task) {
    if (task.observation.empty())
        throw Error(ErrorKind::InvalidConfiguration, "task observation is empty");
    if (task.requirement.values.size() != network_.taxonomy().size())
        throw Error(ErrorKind::Shape, "task requirement does not match the taxonomy");

    TaskOutcome out;
    TaskTrace& trace = out.trace;
    trace.task_id = task.id;
    trace.task_index = network_.task_index();
    trace.requirement = task.requirement;

    const auto profiles = network_.profiles();
    trace.entry_agent = select_initial_agent(task.requirement, profiles);
    for (const auto& p : profiles)
        trace.entry_similarities.push_back(similarity(task.requirement, p.capability));
    trace.events.push_back(
        {{"type", "entry"}, {"agent", trace.entry_agent}, {"similarities", trace.entry_similarities}});

    TaskState state{task, {}, {}, false};
    AgentId current = trace.entry_agent;
    try {
        while (!state.finished) {
            state.visited.push_back(current);
            credit(trace, current, TaskRole::ForwardedOnly, task.requirement);
            trace.events.push_back({{"type", "visit"}, {"agent", current}, {"hop", state.visited.size() - 1}});

            const RoutingAction action = route_step(current, state, std::nullopt, task.requirement, trace);
            switch (action.kind) {
            case RoutingAction::Kind::Forward:
                // Forwarding leaves the task state as it was.
                trace.handoffs.push_back({current, *action.target});
                current = *action.target;
                break;
            case RoutingAction::Kind::Execute: {
                credit(trace, current, TaskRole::Executed, task.requirement);
                std::string result = execute_step(current, state, std::nullopt, task.requirement, trace);
                record_context(state, current, std::move(result), trace);
                state.finished = true;
                break;
            }
            case RoutingAction::Kind::Split:
                run_split(current, action, state, trace);
                break;
            }
        }
    } catch (const Error& e) {
        if (!aborts_task(e))
            throw;
        trace.aborted = true;
        trace.error = e.what();
        trace.events.push_back({{"type", "abort"}, {"error", e.what()}});
    }

    trace.visited = state.visited;
    trace.context = state.context;
    if (!state.context.empty())
        trace.final_answer = state.context.back().text;
    out.answer = trace.final_answer;
    return out;
}

nlohmann::json Runtime::commit_task(TaskTrace& trace, double eval_score) {
    if (!(eval_score >= 0.0 && eval_score <= 1.0))
        throw Error(ErrorKind::OutOfRange, "evaluation score must lie in [0,1]");
    const TaskIndex now = network_.task_index();

    // Embeddings first: a backend failure here must leave the network untouched.
    std::vector<Fragment> fresh;
    if (eval_score > 0.0)
        for (const auto& s : trace.steps)
            fresh.push_back(make_fragment(backend_, s.observation, s.context, s.action, now));

    nlohmann::json record = {{"task_index", now}, {"score", eval_score}};

    nlohmann::json weights = nlohmann::json::array();
    std::set<Edge> seen;
    for (const auto& edge : trace.handoffs) {
        if (!seen.insert(edge).second)
            continue;
        const double before = network_.graph().weight(edge.first, edge.second);
        const double after = network_.graph().update_edge_weight(edge.first, edge.second, eval_score);
        weights.push_back({{"from", edge.first}, {"to", edge.second}, {"old", before}, {"new", after}});
    }
    record["weights"] = std::move(weights);

    const EdgeSet before_prune = network_.graph().edges();
    const EdgeSet& after_prune = network_.graph().prune_edges();
    nlohmann::json removed = nlohmann::json::array();
    nlohmann::json restored = nlohmann::json::array();
    for (const auto& e : before_prune)
        if (!after_prune.contains(e))
            removed.push_back(edge_json(e));
    for (const auto& e : after_prune)
        if (!before_prune.contains(e))
            restored.push_back(edge_json(e));
    record["pruned"] = std::move(removed);
    record["restored"] = std::move(restored);

    nlohmann::json caps = nlohmann::json::array();
    std::set<AgentId> updated;
    const double beta = network_.config().capability.beta;
    for (AgentId id : trace.visited) {
        if (!updated.insert(id).second)
            continue;
        auto role_it = trace.roles.find(id);
        const TaskRole role = role_it == trace.roles.end() ? TaskRole::ForwardedOnly : role_it->second;
        auto req_it = trace.credited.find(id);
        const TaskRequirement& req = req_it == trace.credited.end() ? trace.requirement : req_it->second;
        AgentNode& node = network_.agent(id);
        const CapabilityVector before = node.capability();
        node.set_capability(update_capability(before, compute_delta(req, eval_score, role), beta));
        caps.push_back(
            {{"agent", id}, {"role", to_string(role)}, {"old", before.values}, {"new", node.capability().values}});
    }
    record["capabilities"] = std::move(caps);

    for (const auto& r : trace.retrievals)
        network_.agent(r.agent).memory(r.role).mark_used(r.fragment_ids, now);

    nlohmann::json stored = nlohmann::json::array();
    for (std::size_t i = 0; i < fresh.size(); ++i) {
        const auto& step = trace.steps[i];
        MemoryModule& module = network_.agent(step.agent).memory(step.role);
        const std::size_t size_before = module.size();
        auto evicted = module.insert_with_eviction(std::move(fresh[i]), now, &backend_);
        nlohmann::json entry = {{"agent", step.agent}, {"memory", to_string(step.role)}};
        if (evicted)
            entry["evicted"] = evicted->id;
        else if (module.size() == size_before)
            entry["duplicate"] = true;
        stored.push_back(std::move(entry));
    }
    record["fragments"] = std::move(stored);

    network_.advance_task_index();
    trace.commit = record;
    return record;
}

} // namespace agentnet
