// SPDX-License-Identifier: Apache-2.0
#include "ablation.hpp"

#include "core/error.hpp"

namespace agentnet::bench {

const char* to_string(AblationMode mode) noexcept {
    switch (mode) {
    case AblationMode::None: return "none";
    case AblationMode::RandomAll: return "random-all";
    case AblationMode::RandomOps: return "random-ops";
    case AblationMode::RandomNext: return "random-next";
    case AblationMode::GlobalRouter: return "global-router";
    }
    return "none";
}

AblationMode parse_ablation(std::string_view name) {
    for (auto m : {AblationMode::None, AblationMode::RandomAll, AblationMode::RandomOps, AblationMode::RandomNext,
                   AblationMode::GlobalRouter})
        if (name == to_string(m))
            return m;
    throw Error(ErrorKind::InvalidConfiguration, "unknown ablation mode '" + std::string(name) + "'");
}

AblationPolicy::AblationPolicy(AblationMode mode, std::uint64_t seed) : mode_(mode), rng_(seed) {}

bool AblationPolicy::random_ops() const noexcept {
    return mode_ == AblationMode::RandomOps || mode_ == AblationMode::RandomAll;
}

bool AblationPolicy::random_next() const noexcept {
    return mode_ == AblationMode::RandomNext || mode_ == AblationMode::RandomAll;
}

AgentId AblationPolicy::router_for(AgentId holder) const {
    return mode_ == AblationMode::GlobalRouter ? kCoordinator : holder;
}

RoutingAction AblationPolicy::intercept(const RoutingContext& ctx, RoutingAction proposed) {
    RoutingAction action = proposed;
    if (random_ops()) {
        const auto draw = rng_.below(3);
        if (draw == 0) {
            action = RoutingAction::forward(proposed.kind == RoutingAction::Kind::Forward ? proposed.target
                                                                                          : std::nullopt);
        } else if (draw == 1) {
            if (proposed.kind == RoutingAction::Kind::Split) {
                action = proposed;
            } else {
                action = RoutingAction::split({ctx.state->task.observation}, {"Confirm the final answer"});
            }
        } else {
            action = RoutingAction::execute();
        }
        decisions_.push_back({{"holder", ctx.holder}, {"op", to_string(action.kind)}});
    }
    if (random_next() && action.kind == RoutingAction::Kind::Forward && !ctx.unvisited.empty()) {
        action.target = ctx.unvisited[rng_.below(ctx.unvisited.size())];
        decisions_.push_back({{"holder", ctx.holder}, {"target", *action.target}});
    }
    return action;
}

std::optional<AgentId> AblationPolicy::delegate_target(const RoutingContext& ctx, std::optional<AgentId> proposed) {
    if (!random_next() || ctx.unvisited.empty())
        return proposed;
    const AgentId t = ctx.unvisited[rng_.below(ctx.unvisited.size())];
    decisions_.push_back({{"holder", ctx.holder}, {"delegate", t}});
    return t;
}

} // namespace agentnet::bench
