// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "capability.hpp"
#include "memory_store.hpp"
#include "types.hpp"

namespace agentnet {

/// Router output. Reply grammar, first non-empty line:
///   FORWARD [<id> | agent <id> | next]
///   EXECUTE
///   SPLIT        followed by "LOCAL: <text>" / "DELEGATE: <text>" blocks;
///                untagged lines continue the previous block.
struct RoutingAction {
    enum class Kind { Forward, Split, Execute };

    Kind kind = Kind::Execute;
    std::optional<AgentId> target; // Forward only; empty means "best match"
    std::vector<std::string> local_subtasks;
    std::vector<std::string> delegated_subtasks;

    static RoutingAction forward(std::optional<AgentId> target = std::nullopt);
    static RoutingAction execute();
    static RoutingAction split(std::vector<std::string> local, std::vector<std::string> delegated);

    bool operator==(const RoutingAction&) const = default;
};

const char* to_string(RoutingAction::Kind kind) noexcept;

/// Parses a router reply; empty when it does not follow the grammar.
std::optional<RoutingAction> parse_action(std::string_view reply);

/// Canonical text of an action, parseable by parse_action.
std::string render_action(const RoutingAction& action);

struct ContextEntry {
    AgentId agent = 0;
    std::string text;

    bool operator==(const ContextEntry&) const = default;
};

std::string render_context(const std::vector<ContextEntry>& context);

struct PeerView {
    AgentId id = 0;
    CapabilityVector capability;
};

/// Everything a router or executor prompt may show. Built from the holder's
/// own state and the task state only.
struct PromptInput {
    AgentId holder = 0;
    AgentId router = 0; // differs from holder only under a fixed central router
    const Taxonomy* taxonomy = nullptr;
    CapabilityVector capability;
    std::string observation;
    std::optional<std::string> subtask;
    TaskRequirement requirement;
    const std::vector<ContextEntry>* context = nullptr;
    std::vector<PeerView> candidates;
    std::vector<RetrievedFragment> memory;
};

enum class PromptStage { Reason, Act };

std::string router_system_prompt(AgentId router);
std::string executor_system_prompt(AgentId holder);

std::string router_prompt(const PromptInput& input, PromptStage stage, std::string_view reasoning = {});
std::string executor_prompt(const PromptInput& input, PromptStage stage, std::string_view reasoning = {});

std::string format_vector(const Taxonomy& taxonomy, const std::vector<double>& values);

} // namespace agentnet
