// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "core/capability.hpp"
#include "core/graph_topology.hpp"
#include "core/runtime.hpp"
#include "dataset.hpp"

namespace agentnet::bench {

struct TaskResult {
    std::string id;
    std::string category;
    std::string answer;
    std::string gold;
    int score = 0;
    bool aborted = false;
    std::string error;
};

struct RunReport {
    Phase phase = Phase::Train;
    BenchmarkKind benchmark = BenchmarkKind::Bbh;
    AblationMode ablation = AblationMode::None;
    Taxonomy taxonomy;
    std::vector<TaskResult> results;
    double accuracy = 0.0; // 0 when there are no results
    std::size_t correct = 0;
    std::vector<GraphSnapshot> snapshots; // initial state first, then one per task
    // capabilities[s][agent] at snapshot s
    std::vector<std::vector<std::vector<double>>> capabilities;
    std::size_t completion_calls = 0;
    std::size_t embedding_calls = 0;
    std::vector<nlohmann::json> traces;
    std::vector<std::string> warnings;

    nlohmann::json summary() const;
};

struct SweepRow {
    std::size_t agents = 0;
    std::size_t cmax = 0;
    double accuracy = 0.0;
    std::size_t tasks = 0;
};

/// Everything a run needs besides the records.
struct PhaseContext {
    Network& network;
    Backend& backend;
    const RequirementExtractor& extractor;
    BenchmarkKind benchmark;
    RoutingInterceptor* interceptor = nullptr;
    AblationMode ablation = AblationMode::None;
};

/// Runs the records in priority order (higher first, file order among
/// equals). Train commits after every task; test leaves the network
/// untouched. Per-task failures are recorded and the run continues.
RunReport run_phase(PhaseContext& ctx, Phase phase, const std::vector<TaskRecord>& records);

std::unique_ptr<Backend> make_backend(const RunConfig& config, const HeuristicTable& table);

struct RunOutput {
    std::optional<RunReport> train;
    std::optional<RunReport> test;
    std::unique_ptr<Network> network;

    const RunReport& last() const { return test ? *test : *train; }
};

/// Loads dataset, heuristics, backend and (optionally) a saved state, runs
/// the configured phases and, when an output directory is set, exports the
/// reports and the trained state.
RunOutput run_config(const RunConfig& config);

/// Runs the config once per (agents, cmax) pair and writes sweep.csv when
/// an output directory is set.
std::vector<SweepRow> run_sweep(const RunConfig& config);

/// Writes summary.json, and for non-empty reports scores.csv,
/// abilities.csv, capability_trajectory.csv, snapshots.jsonl and
/// traces.jsonl.
void export_report(const RunReport& report, const std::filesystem::path& dir);
void export_sweep(const std::vector<SweepRow>& rows, const std::filesystem::path& dir);

/// Names of the files export_report writes for this report.
std::vector<std::string> report_files(const RunReport& report);

} // namespace agentnet::bench
