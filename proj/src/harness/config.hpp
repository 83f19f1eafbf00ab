// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ablation.hpp"
#include "core/http_backend.hpp"
#include "core/network.hpp"
#include "sim_backend.hpp"

namespace agentnet::bench {

enum class Phase { Train, Test, TrainTest };
enum class BackendMode { Scripted, Http, Sim };

const char* to_string(Phase phase) noexcept;
Phase parse_phase(std::string_view name);
const char* to_string(BackendMode mode) noexcept;
BackendMode parse_backend_mode(std::string_view name);

/// Everything one run needs. Relative paths in a config file resolve
/// against the file's directory; paths given as overrides are taken as is.
struct RunConfig {
    NetworkConfig network;
    bool taxonomy_set = false; // otherwise taken from the heuristic table

    BackendMode backend = BackendMode::Scripted;
    std::filesystem::path script;
    HttpBackendConfig http;
    SimParams sim;

    std::filesystem::path dataset; // manifest
    std::optional<std::filesystem::path> heuristics;
    Phase phase = Phase::Train;
    std::uint64_t seed = 0;
    AblationMode ablation = AblationMode::None;
    std::optional<std::filesystem::path> out;
    std::optional<std::filesystem::path> state_in;
    bool save_state = true;

    std::vector<std::size_t> sweep_agents;
    std::vector<std::size_t> sweep_cmax;

    void validate() const;

    static RunConfig from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
    static RunConfig load(const std::filesystem::path& path);
    nlohmann::json to_json() const;
};

} // namespace agentnet::bench
