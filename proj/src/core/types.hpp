// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>

namespace agentnet {

using AgentId = std::uint32_t;

/// Ordered (from, to) agent pair.
using Edge = std::pair<AgentId, AgentId>;

/// Position of a task in the run; doubles as the logical clock for memory statistics.
using TaskIndex = std::uint64_t;

} // namespace agentnet
