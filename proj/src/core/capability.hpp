// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "types.hpp"

namespace agentnet {

class Backend;

/// Ordered ability names shared by every vector in a run.
using Taxonomy = std::vector<std::string>;

Taxonomy default_taxonomy();
void validate_taxonomy(const Taxonomy& taxonomy);

struct CapabilityVector {
    std::vector<double> values;

    static CapabilityVector uniform(std::size_t dim, double value = 0.5);
    bool operator==(const CapabilityVector&) const = default;
};

enum class RequirementSource { Atomic, Compound };

struct TaskRequirement {
    std::vector<double> values;
    RequirementSource source = RequirementSource::Atomic;

    bool operator==(const TaskRequirement&) const = default;
};

struct CapabilityParams {
    double beta = 0.8;
    Taxonomy taxonomy = default_taxonomy();

    void validate() const;
};

/// Category label -> requirement vector, over a fixed taxonomy.
class HeuristicTable {
public:
    HeuristicTable() = default;
    HeuristicTable(Taxonomy taxonomy, std::map<std::string, std::vector<double>> entries);

    static HeuristicTable from_json(const nlohmann::json& doc);
    static HeuristicTable load(const std::filesystem::path& path);
    nlohmann::json to_json() const;

    const Taxonomy& taxonomy() const noexcept { return taxonomy_; }
    bool contains(std::string_view category) const;
    const std::vector<double>& lookup(std::string_view category) const;
    std::vector<std::string> categories() const;

    /// Merges another table over the same taxonomy; later entries win.
    void merge(const HeuristicTable& other);

private:
    Taxonomy taxonomy_;
    std::map<std::string, std::vector<double>, std::less<>> entries_;
};

struct TaskMetadata {
    std::optional<std::string> category;
    std::optional<int> difficulty;
};

enum class ExtractionMode { Atomic, Compound };

/// Maps task observations to capability requirements: table lookup for
/// labelled (atomic) tasks, one model call for everything else.
class RequirementExtractor {
public:
    RequirementExtractor(Taxonomy taxonomy, HeuristicTable table, Backend* backend);

    /// Atomic when the metadata carries a category the table covers.
    ExtractionMode mode_for(const TaskMetadata& metadata) const;

    TaskRequirement extract(std::string_view observation, const TaskMetadata& metadata,
                            ExtractionMode mode) const;
    TaskRequirement extract(std::string_view observation, const TaskMetadata& metadata) const {
        return extract(observation, metadata, mode_for(metadata));
    }

    const Taxonomy& taxonomy() const noexcept { return taxonomy_; }
    const HeuristicTable& table() const noexcept { return table_; }

    std::string analysis_prompt(std::string_view observation) const;

private:
    Taxonomy taxonomy_;
    HeuristicTable table_;
    Backend* backend_;
};

/// Parses the first bracketed group of exactly `dim` numbers and rescales it
/// into [0,1]: negatives clamp to 0, and a group whose maximum exceeds 1 is
/// divided by that maximum. Throws ExtractionError otherwise.
std::vector<double> parse_requirement_reply(std::string_view reply, std::size_t dim);

/// Cosine similarity; 0 when either vector has zero norm.
double similarity(const TaskRequirement& req, const CapabilityVector& cap);

struct AgentProfile {
    AgentId id = 0;
    CapabilityVector capability;
};

/// Best-matching agent; ties go to the lowest id.
AgentId select_initial_agent(const TaskRequirement& req, std::span<const AgentProfile> agents);

std::optional<AgentId> select_next_agent(const TaskRequirement& req, std::span<const AgentProfile> candidates,
                                         const std::set<AgentId>& exclude);

CapabilityVector update_capability(const CapabilityVector& cap, const CapabilityVector& delta, double beta);

enum class TaskRole { Executed, Split, ForwardedOnly };

const char* to_string(TaskRole role) noexcept;

/// Credit earned for one task: score-weighted requirement for contributors,
/// nothing for pure relays.
CapabilityVector compute_delta(const TaskRequirement& req, double eval_score, TaskRole role);

} // namespace agentnet
