// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "core/backend.hpp"
#include "core/scripted_backend.hpp"
#include "core/types.hpp"

namespace agentnet::bench {

struct SimParams {
    std::uint64_t seed = 7;
    double cold_success = 0.4;    // success rate of an executor with no relevant experience
    double skilled_success = 0.9; // success rate once skill_depth matching memories are retrieved
    std::size_t skill_depth = 3;
    std::size_t hop_budget = 2;   // routers holding a task this many hops in always execute
    double analyst_insight = 0.3; // share of the true profile in the analyst's estimate, rest neutral 0.5
    double confidence = 0.9;   // own-fit level above which an inexperienced router stops passing tasks on
    double margin = 0.1;       // fit advantage at which a router always forwards
    std::size_t embed_dim = 64;

    void validate() const;
};

/// Deterministic stand-in for a model whose skill comes from experience,
/// used with the synthetic suite. Tasks carry their true specialty as a
/// "(<specialty>)" tag. An executor answers correctly with a probability
/// rising from cold_success to skilled_success with the number of retrieved
/// memories of the same specialty; the draw is a fixed hash of seed, agent
/// and task. A router forwards toward the candidate whose capabilities best
/// fit the specialty, guided by its routing memory, and gives up passing the
/// task on after hop_budget hops. The capability analyst answers a blend of
/// the true profile and a neutral one.
class SkillSimBackend : public Backend {
public:
    SkillSimBackend(std::map<std::string, std::vector<double>> specialties, SimParams params = {});

    const SimParams& params() const noexcept { return params_; }

    /// Specialty tag found in `text`, if any.
    std::optional<std::string> specialty_of(std::string_view text) const;

    /// Correct answer for a synthetic task, if the task is recognised.
    static std::optional<std::string> solve(std::string_view observation);

protected:
    std::string do_complete(const CompletionRequest& request) override;
    EmbeddingVector do_embed(std::string_view text) override;

private:
    std::string route(const std::string& prompt);
    std::string answer(const std::string& prompt) const;

    std::map<std::string, std::vector<double>> specialties_;
    SimParams params_;
    HashEmbedder embedder_;
    // routing visits seen for the task currently being routed
    std::string current_task_;
    std::vector<long> current_visits_;
    std::mutex mutex_;
};

} // namespace agentnet::bench
