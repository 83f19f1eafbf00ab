// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "core/capability.hpp"
#include "dataset.hpp"

namespace agentnet::bench {

/// Two-specialty suite: "logic" (integer sums) and "lexical" (word
/// reversal). A share of tasks is labelled "general": the label hides the
/// specialty, which only the task text reveals, so their requirement comes
/// from model analysis instead of the table.
struct SyntheticSpec {
    std::size_t count = 200;
    std::uint64_t seed = 2024;
    double general_share = 0.3;
    std::string id_prefix = "syn";
};

std::vector<TaskRecord> generate_synthetic(const SyntheticSpec& spec);

/// Table covering the two labelled specialties over the default taxonomy.
HeuristicTable synthetic_heuristics();

} // namespace agentnet::bench
