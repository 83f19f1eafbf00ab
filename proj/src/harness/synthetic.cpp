// SPDX-License-Identifier: Apache-2.0
#include "synthetic.hpp"

#include <algorithm>
#include <array>

#include "core/rng.hpp"

namespace agentnet::bench {
namespace {

constexpr std::array<const char*, 24> kWords = {
    "planet", "garden", "silver", "window", "rocket", "harbor", "lantern", "marble",
    "candle", "forest", "pepper", "bridge", "meadow", "copper", "violet", "thunder",
    "orchid", "saddle", "wander", "quartz", "tunnel", "falcon", "basket", "puzzle"};

} // namespace

std::vector<TaskRecord> generate_synthetic(const SyntheticSpec& spec) {
    SplitMix64 rng(spec.seed);
    std::vector<TaskRecord> out;
    out.reserve(spec.count);
    for (std::size_t i = 0; i < spec.count; ++i) {
        const bool logic = rng.below(2) == 0;
        const bool general = rng.uniform() < spec.general_share;
        const std::string specialty = logic ? "logic" : "lexical";
        TaskRecord r;
        r.id = spec.id_prefix + "-" + std::to_string(i);
        r.category = general ? "general" : specialty;
        const std::string head = "Task " + std::to_string(i) + " (" + specialty + "): ";
        if (logic) {
            const auto a = static_cast<long long>(rng.below(900)) + 10;
            const auto b = static_cast<long long>(rng.below(900)) + 10;
            r.query = head + "Compute " + std::to_string(a) + " + " + std::to_string(b) + ".";
            r.gold = std::to_string(a + b);
        } else {
            std::string w = kWords[rng.below(kWords.size())];
            r.query = head + "Reverse the word \"" + w + "\".";
            std::reverse(w.begin(), w.end());
            r.gold = w;
        }
        r.difficulty = 1;
        out.push_back(std::move(r));
    }
    return out;
}

HeuristicTable synthetic_heuristics() {
    return HeuristicTable(default_taxonomy(), {{"logic", {0.9, 0.1, 0.2, 0.1}}, {"lexical", {0.1, 0.9, 0.1, 0.2}}});
}

} // namespace agentnet::bench
