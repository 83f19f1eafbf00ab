// SPDX-License-Identifier: Apache-2.0
#include "network.hpp"

#include <cmath>
#include <fstream>

#include "error.hpp"

namespace agentnet {

namespace {

void check_capability(const CapabilityVector& cap, std::size_t dim) {
    if (cap.values.size() != dim)
        throw Error(ErrorKind::Shape, "capability vector has " + std::to_string(cap.values.size()) +
                                          " entries, taxonomy has " + std::to_string(dim));
    for (double v : cap.values)
        if (!std::isfinite(v) || v < 0.0 || v > 1.0)
            throw Error(ErrorKind::OutOfRange, "capability entries must lie in [0,1]");
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << doc.dump(2) << "\n";
}

} // namespace

void NetworkConfig::validate() const {
    if (n_agents == 0)
        throw Error(ErrorKind::InvalidConfiguration, "network needs at least one agent");
    topology.validate();
    capability.validate();
    utility.validate();
    if (k == 0)
        throw Error(ErrorKind::InvalidConfiguration, "k must be positive");
    if (c_max == 0)
        throw Error(ErrorKind::InvalidConfiguration, "c_max must be positive");
    if (!std::isfinite(initial_capability) || initial_capability < 0.0 || initial_capability > 1.0)
        throw Error(ErrorKind::InvalidConfiguration, "initial capability must lie in [0,1]");
    for (const auto& [id, cap] : capability_overrides) {
        if (id >= n_agents)
            throw Error(ErrorKind::MissingAgent, "capability override for unknown agent " + std::to_string(id));
        check_capability(cap, capability.taxonomy.size());
    }
}

AgentNode::AgentNode(AgentId id, CapabilityVector capability, MemoryModule router_memory,
                     MemoryModule executor_memory)
    : id_(id), capability_(std::move(capability)), router_memory_(std::move(router_memory)),
      executor_memory_(std::move(executor_memory)) {}

void AgentNode::set_capability(CapabilityVector capability) {
    check_capability(capability, capability_.values.size());
    capability_ = std::move(capability);
}

Network::Network(NetworkConfig config)
    : config_(std::move(config)), graph_(TopologyGraph::fully_connected(std::max<std::size_t>(config_.n_agents, 1),
                                                                        config_.topology)) {
    config_.validate();
    const std::size_t dim = config_.capability.taxonomy.size();
    for (AgentId id = 0; id < config_.n_agents; ++id) {
        auto it = config_.capability_overrides.find(id);
        CapabilityVector cap = it != config_.capability_overrides.end()
                                   ? it->second
                                   : CapabilityVector::uniform(dim, config_.initial_capability);
        agents_.emplace_back(id, std::move(cap),
                             MemoryModule(MemoryRole::Router, config_.c_max, config_.utility, config_.eviction),
                             MemoryModule(MemoryRole::Executor, config_.c_max, config_.utility, config_.eviction));
    }
}

const AgentNode& Network::agent(AgentId id) const {
    if (id >= agents_.size())
        throw Error(ErrorKind::MissingAgent, "unknown agent " + std::to_string(id));
    return agents_[id];
}

AgentNode& Network::agent(AgentId id) {
    if (id >= agents_.size())
        throw Error(ErrorKind::MissingAgent, "unknown agent " + std::to_string(id));
    return agents_[id];
}

std::vector<AgentProfile> Network::profiles() const {
    std::vector<AgentProfile> out;
    out.reserve(agents_.size());
    for (const auto& a : agents_)
        out.push_back({a.id(), a.capability()});
    return out;
}

nlohmann::json Network::state_to_json() const {
    nlohmann::json agents = nlohmann::json::array();
    for (const auto& a : agents_)
        agents.push_back({
            {"id", a.id()},
            {"capability", a.capability().values},
            {"router_memory", a.router_memory().to_json()},
            {"executor_memory", a.executor_memory().to_json()},
        });
    return {
        {"taxonomy", taxonomy()},
        {"graph", snapshot_to_json(snapshot())},
        {"agents", std::move(agents)},
    };
}

Network Network::state_from_json(const nlohmann::json& doc, NetworkConfig config) {
    try {
        const auto& agents = doc.at("agents");
        config.n_agents = agents.size();
        if (doc.contains("taxonomy"))
            config.capability.taxonomy = doc.at("taxonomy").get<Taxonomy>();
        Network net(config);
        const GraphSnapshot snap = snapshot_from_json(doc.at("graph"));
        if (snap.agents.size() != config.n_agents)
            throw Error(ErrorKind::Schema, "graph and agent list disagree on the agent count");
        net.graph_ = restore_graph(snap, config.topology);
        net.task_index_ = snap.task_index;
        for (const auto& a : agents) {
            const AgentId id = a.at("id").get<AgentId>();
            AgentNode& node = net.agent(id);
            node.set_capability({a.at("capability").get<std::vector<double>>()});
            node.memory(MemoryRole::Router) = MemoryModule::from_json(a.at("router_memory"));
            node.memory(MemoryRole::Executor) = MemoryModule::from_json(a.at("executor_memory"));
        }
        return net;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Schema, std::string("malformed network state: ") + e.what());
    }
}

void Network::save_state(const std::filesystem::path& dir) const {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
    nlohmann::json index = {{"taxonomy", taxonomy()}, {"graph", snapshot_to_json(snapshot())}};
    nlohmann::json caps = nlohmann::json::array();
    for (const auto& a : agents_) {
        caps.push_back({{"id", a.id()}, {"capability", a.capability().values}});
        write_json(dir / ("agent" + std::to_string(a.id()) + ".rou.json"), a.router_memory().to_json());
        write_json(dir / ("agent" + std::to_string(a.id()) + ".exe.json"), a.executor_memory().to_json());
    }
    index["agents"] = std::move(caps);
    write_json(dir / "network.json", index);
}

Network Network::load_state(const std::filesystem::path& dir, NetworkConfig config) {
    nlohmann::json doc = read_json(dir / "network.json");
    for (auto& a : doc.at("agents")) {
        const std::string stem = "agent" + std::to_string(a.at("id").get<AgentId>());
        a["router_memory"] = read_json(dir / (stem + ".rou.json"));
        a["executor_memory"] = read_json(dir / (stem + ".exe.json"));
    }
    return state_from_json(doc, std::move(config));
}

} // namespace agentnet
