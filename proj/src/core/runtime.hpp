// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "backend.hpp"
#include "capability.hpp"
#include "network.hpp"
#include "protocol.hpp"

namespace agentnet {

struct Task {
    std::string id;
    std::string observation;
    TaskRequirement requirement;
    int priority = 0;
};

/// What travels between agents: the task, attributed results so far, and
/// the agents already visited (never revisited within one task).
struct TaskState {
    Task task;
    std::vector<ContextEntry> context;
    std::vector<AgentId> visited;
    bool finished = false;

    bool has_visited(AgentId id) const;
};

/// The only message exchanged between agents.
struct RouteEnvelope {
    TaskState state;
    std::size_t hop_count = 0;
};

/// Appends one attributed result; earlier entries are untouched.
TaskState append_context(TaskState state, AgentId agent, std::string result);

/// A step an agent performed, stored in its memory if the task succeeds.
struct PendingFragment {
    AgentId agent = 0;
    MemoryRole role = MemoryRole::Router;
    std::string observation;
    std::string context;
    std::string action;
};

struct Retrieval {
    AgentId agent = 0;
    MemoryRole role = MemoryRole::Router;
    std::vector<std::uint64_t> fragment_ids;
};

/// Audit record of one task: routing events as they happened plus what the
/// commit phase needs.
struct TaskTrace {
    std::string task_id;
    TaskIndex task_index = 0;
    TaskRequirement requirement;
    AgentId entry_agent = 0;
    std::vector<double> entry_similarities;
    nlohmann::json events = nlohmann::json::array();
    std::vector<Edge> handoffs;
    std::vector<AgentId> visited;
    std::map<AgentId, TaskRole> roles;
    std::map<AgentId, TaskRequirement> credited;
    std::vector<PendingFragment> steps;
    std::vector<Retrieval> retrievals;
    std::vector<ContextEntry> context;
    std::string final_answer;
    bool aborted = false;
    std::string error;
    nlohmann::json commit; // null until committed

    nlohmann::json to_json() const;
};

struct TaskOutcome {
    std::string answer;
    TaskTrace trace;
};

/// What a routing override may look at.
struct RoutingContext {
    AgentId holder = 0;
    const TaskState* state = nullptr;
    std::vector<AgentId> candidates; // graph neighbours not yet visited (or every unvisited agent)
    std::vector<AgentId> unvisited;  // every unvisited agent other than the holder
    bool delegated_subtask = false;
};

/// Hook for replacing routing decisions (ablations, central routing). The
/// defaults leave the model's decision alone.
class RoutingInterceptor {
public:
    virtual ~RoutingInterceptor() = default;

    /// Agent whose router decides while `holder` holds the task.
    virtual AgentId router_for(AgentId holder) const { return holder; }
    virtual RoutingAction intercept(const RoutingContext&, RoutingAction proposed) { return proposed; }
    virtual std::optional<AgentId> delegate_target(const RoutingContext&, std::optional<AgentId> proposed) {
        return proposed;
    }
};

/// Runs tasks over a network. run_task reads the network only; all learning
/// happens in commit_task, so a task observes either all or none of the
/// previous task's updates.
class Runtime {
public:
    Runtime(Network& network, Backend& backend, const RequirementExtractor* extractor = nullptr,
            RoutingInterceptor* interceptor = nullptr);

    TaskOutcome run_task(const Task& task);

    /// Edge EMA for every handoff, prune, capability EMA for every visited
    /// agent, usage statistics, and (for score > 0) fragment insertion.
    /// Returns the commit record also stored in trace.commit.
    nlohmann::json commit_task(TaskTrace& trace, double eval_score);

    /// Router decision for `holder` (reason + act completions). Unparseable
    /// replies get one retry, then fall back to Execute.
    RoutingAction route_step(AgentId holder, const TaskState& state, const std::optional<std::string>& subtask,
                             const TaskRequirement& requirement, TaskTrace& trace);

    /// Executor answer for the task or one subtask (reason + act completions).
    std::string execute_step(AgentId holder, const TaskState& state, const std::optional<std::string>& subtask,
                             const TaskRequirement& requirement, TaskTrace& trace);

    /// Out-neighbours of `holder` not yet visited; every unvisited agent
    /// when that is empty.
    std::vector<AgentId> routing_candidates(AgentId holder, const TaskState& state) const;

private:
    PromptInput prompt_input(AgentId holder, AgentId memory_owner, MemoryRole role, const TaskState& state,
                             const std::optional<std::string>& subtask, const TaskRequirement& requirement,
                             bool with_candidates, TaskTrace& trace);
    std::optional<AgentId> best_candidate(const TaskRequirement& req, const std::vector<AgentId>& candidates) const;
    RoutingContext routing_context(AgentId holder, const TaskState& state, bool delegated) const;
    void run_split(AgentId holder, const RoutingAction& action, TaskState& state, TaskTrace& trace);
    void run_delegated(AgentId from, const std::string& subtask, TaskState& state, TaskTrace& trace);
    void record_context(TaskState& state, AgentId agent, std::string result, TaskTrace& trace);
    TaskRequirement subtask_requirement(const std::string& subtask, const TaskRequirement& parent, TaskTrace& trace);
    void credit(TaskTrace& trace, AgentId agent, TaskRole role, const TaskRequirement& req);

    Network& network_;
    Backend& backend_;
    const RequirementExtractor* extractor_;
    RoutingInterceptor* interceptor_;
};

} // namespace agentnet
