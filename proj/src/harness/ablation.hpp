// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>
#include <vector>

#include <json.hpp>

#include "core/rng.hpp"
#include "core/runtime.hpp"

namespace agentnet::bench {

enum class AblationMode { None, RandomAll, RandomOps, RandomNext, GlobalRouter };

const char* to_string(AblationMode mode) noexcept;
AblationMode parse_ablation(std::string_view name);

/// Router overrides for the ablation study. All randomness comes from one
/// seeded generator, drawn only at ablated decision points.
class AblationPolicy : public RoutingInterceptor {
public:
    static constexpr AgentId kCoordinator = 0;

    AblationPolicy(AblationMode mode, std::uint64_t seed);

    AblationMode mode() const noexcept { return mode_; }

    AgentId router_for(AgentId holder) const override;
    RoutingAction intercept(const RoutingContext& ctx, RoutingAction proposed) override;
    std::optional<AgentId> delegate_target(const RoutingContext& ctx, std::optional<AgentId> proposed) override;

    /// Every randomized decision in order.
    const std::vector<nlohmann::json>& decisions() const noexcept { return decisions_; }

private:
    bool random_ops() const noexcept;
    bool random_next() const noexcept;

    AblationMode mode_;
    SplitMix64 rng_;
    std::vector<nlohmann::json> decisions_;
};

} // namespace agentnet::bench
