// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <fstream>
#include <set>

#include "core/error.hpp"

namespace agentnet::bench {
namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_relative() && !base.empty())
        return base / path;
    return path;
}

template <class T>
T get(const nlohmann::json& doc, const char* key) {
    try {
        return doc.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw Error(ErrorKind::InvalidConfiguration, std::string("config field '") + key + "' has the wrong type");
    }
}

void check_keys(const nlohmann::json& doc, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : doc.items())
        if (!allowed.count(key))
            throw Error(ErrorKind::InvalidConfiguration, "unknown " + where + " field '" + key + "'");
}

} // namespace

const char* to_string(Phase phase) noexcept {
    switch (phase) {
    case Phase::Train: return "train";
    case Phase::Test: return "test";
    case Phase::TrainTest: return "train-test";
    }
    return "train";
}

Phase parse_phase(std::string_view name) {
    if (name == "train")
        return Phase::Train;
    if (name == "test")
        return Phase::Test;
    if (name == "train-test")
        return Phase::TrainTest;
    throw Error(ErrorKind::InvalidConfiguration, "unknown phase '" + std::string(name) + "'");
}

const char* to_string(BackendMode mode) noexcept {
    switch (mode) {
    case BackendMode::Scripted: return "scripted";
    case BackendMode::Http: return "http";
    case BackendMode::Sim: return "sim";
    }
    return "scripted";
}

BackendMode parse_backend_mode(std::string_view name) {
    if (name == "scripted")
        return BackendMode::Scripted;
    if (name == "http")
        return BackendMode::Http;
    if (name == "sim")
        return BackendMode::Sim;
    throw Error(ErrorKind::InvalidConfiguration, "unknown backend mode '" + std::string(name) + "'");
}

void RunConfig::validate() const {
    network.validate();
    sim.validate();
    if (dataset.empty())
        throw Error(ErrorKind::InvalidConfiguration, "no dataset manifest given");
    if (backend == BackendMode::Scripted && script.empty())
        throw Error(ErrorKind::InvalidConfiguration, "scripted backend needs a script file");
    if (http.max_attempts < 1)
        throw Error(ErrorKind::InvalidConfiguration, "http max_attempts must be at least 1");
    for (auto n : sweep_agents)
        if (n == 0)
            throw Error(ErrorKind::InvalidConfiguration, "sweep agent counts must be positive");
    for (auto c : sweep_cmax)
        if (c == 0)
            throw Error(ErrorKind::InvalidConfiguration, "sweep capacities must be positive");
}

RunConfig RunConfig::from_json(const nlohmann::json& doc, const std::filesystem::path& base) {
    if (!doc.is_object())
        throw Error(ErrorKind::InvalidConfiguration, "config must be an object");
    check_keys(doc,
               {"agents", "alpha", "beta", "theta_w", "w0", "k", "cmax", "taxonomy", "initial_capability",
                "capability_overrides", "utility_weights", "eviction", "backend", "dataset", "heuristics", "phase",
                "seed", "ablation", "out", "state_in", "save_state", "sweep"},
               "config");
    RunConfig c;
    auto& n = c.network;
    if (doc.contains("agents"))
        n.n_agents = get<std::size_t>(doc, "agents");
    if (doc.contains("alpha"))
        n.topology.alpha = get<double>(doc, "alpha");
    if (doc.contains("beta"))
        n.capability.beta = get<double>(doc, "beta");
    if (doc.contains("theta_w"))
        n.topology.theta_w = get<double>(doc, "theta_w");
    if (doc.contains("w0"))
        n.topology.w0 = get<double>(doc, "w0");
    if (doc.contains("k"))
        n.k = get<std::size_t>(doc, "k");
    if (doc.contains("cmax"))
        n.c_max = get<std::size_t>(doc, "cmax");
    if (doc.contains("taxonomy")) {
        n.capability.taxonomy = get<Taxonomy>(doc, "taxonomy");
        c.taxonomy_set = true;
    }
    if (doc.contains("initial_capability"))
        n.initial_capability = get<double>(doc, "initial_capability");
    if (doc.contains("capability_overrides"))
        for (const auto& [id, values] : doc.at("capability_overrides").items())
            n.capability_overrides[static_cast<AgentId>(std::stoul(id))] =
                CapabilityVector{values.get<std::vector<double>>()};
    if (doc.contains("utility_weights")) {
        const auto& u = doc.at("utility_weights");
        check_keys(u, {"frequency", "recency", "uniqueness"}, "utility_weights");
        n.utility.frequency = u.value("frequency", n.utility.frequency);
        n.utility.recency = u.value("recency", n.utility.recency);
        n.utility.uniqueness = u.value("uniqueness", n.utility.uniqueness);
    }
    if (doc.contains("eviction")) {
        const auto e = get<std::string>(doc, "eviction");
        if (e == "utility")
            n.eviction = EvictionMode::Utility;
        else if (e == "model")
            n.eviction = EvictionMode::ModelJudged;
        else
            throw Error(ErrorKind::InvalidConfiguration, "unknown eviction mode '" + e + "'");
    }
    if (doc.contains("backend")) {
        const auto& b = doc.at("backend");
        if (b.is_string()) {
            c.backend = parse_backend_mode(b.get<std::string>());
        } else {
            check_keys(b,
                       {"mode", "script", "api_base", "model", "embed_model", "timeout_ms", "max_attempts",
                        "backoff_ms", "seed", "embed_dim", "cold_success", "skilled_success", "skill_depth", "hop_budget",
                        "analyst_insight", "confidence", "margin"},
                       "backend");
            c.backend = parse_backend_mode(b.value("mode", std::string("scripted")));
            if (b.contains("script"))
                c.script = resolve(base, get<std::string>(b, "script"));
            c.http.api_base = b.value("api_base", c.http.api_base);
            c.http.model = b.value("model", c.http.model);
            c.http.embed_model = b.value("embed_model", c.http.embed_model);
            if (b.contains("timeout_ms"))
                c.http.timeout = std::chrono::milliseconds(get<long>(b, "timeout_ms"));
            if (b.contains("backoff_ms"))
                c.http.backoff = std::chrono::milliseconds(get<long>(b, "backoff_ms"));
            c.http.max_attempts = b.value("max_attempts", c.http.max_attempts);
            c.sim.seed = b.value("seed", c.sim.seed);
            c.sim.embed_dim = b.value("embed_dim", c.sim.embed_dim);
            c.sim.cold_success = b.value("cold_success", c.sim.cold_success);
            c.sim.skilled_success = b.value("skilled_success", c.sim.skilled_success);
            c.sim.skill_depth = b.value("skill_depth", c.sim.skill_depth);
            c.sim.hop_budget = b.value("hop_budget", c.sim.hop_budget);
            c.sim.analyst_insight = b.value("analyst_insight", c.sim.analyst_insight);
            c.sim.confidence = b.value("confidence", c.sim.confidence);
            c.sim.margin = b.value("margin", c.sim.margin);
        }
    }
    if (doc.contains("dataset"))
        c.dataset = resolve(base, get<std::string>(doc, "dataset"));
    if (doc.contains("heuristics"))
        c.heuristics = resolve(base, get<std::string>(doc, "heuristics"));
    if (doc.contains("phase"))
        c.phase = parse_phase(get<std::string>(doc, "phase"));
    if (doc.contains("seed"))
        c.seed = get<std::uint64_t>(doc, "seed");
    if (doc.contains("ablation"))
        c.ablation = parse_ablation(get<std::string>(doc, "ablation"));
    if (doc.contains("out"))
        c.out = resolve(base, get<std::string>(doc, "out"));
    if (doc.contains("state_in"))
        c.state_in = resolve(base, get<std::string>(doc, "state_in"));
    if (doc.contains("save_state"))
        c.save_state = get<bool>(doc, "save_state");
    if (doc.contains("sweep")) {
        const auto& s = doc.at("sweep");
        check_keys(s, {"agents", "cmax"}, "sweep");
        c.sweep_agents = s.value("agents", std::vector<std::size_t>{});
        c.sweep_cmax = s.value("cmax", std::vector<std::size_t>{});
    }
    // Paths and the dataset are checked when the run starts; overrides may still supply them.
    c.network.validate();
    c.sim.validate();
    return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open config " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
    }
    return from_json(doc, path.parent_path());
}

nlohmann::json RunConfig::to_json() const {
    const auto& n = network;
    nlohmann::json doc = {{"agents", n.n_agents},
                          {"alpha", n.topology.alpha},
                          {"beta", n.capability.beta},
                          {"theta_w", n.topology.theta_w},
                          {"w0", n.topology.w0},
                          {"k", n.k},
                          {"cmax", n.c_max},
                          {"taxonomy", n.capability.taxonomy},
                          {"initial_capability", n.initial_capability},
                          {"utility_weights",
                           {{"frequency", n.utility.frequency},
                            {"recency", n.utility.recency},
                            {"uniqueness", n.utility.uniqueness}}},
                          {"eviction", n.eviction == EvictionMode::Utility ? "utility" : "model"},
                          {"dataset", dataset.string()},
                          {"phase", to_string(phase)},
                          {"seed", seed},
                          {"ablation", to_string(ablation)},
                          {"save_state", save_state}};
    nlohmann::json b = {{"mode", to_string(backend)}};
    if (backend == BackendMode::Scripted)
        b["script"] = script.string();
    if (backend == BackendMode::Http) {
        b["api_base"] = http.api_base;
        b["model"] = http.model;
        b["embed_model"] = http.embed_model;
        b["timeout_ms"] = http.timeout.count();
        b["max_attempts"] = http.max_attempts;
        b["backoff_ms"] = http.backoff.count();
    }
    if (backend == BackendMode::Sim) {
        b["seed"] = sim.seed;
        b["embed_dim"] = sim.embed_dim;
        b["cold_success"] = sim.cold_success;
        b["skilled_success"] = sim.skilled_success;
        b["skill_depth"] = sim.skill_depth;
        b["hop_budget"] = sim.hop_budget;
        b["analyst_insight"] = sim.analyst_insight;
        b["confidence"] = sim.confidence;
        b["margin"] = sim.margin;
    }
    doc["backend"] = b;
    if (!n.capability_overrides.empty()) {
        nlohmann::json o = nlohmann::json::object();
        for (const auto& [id, cap] : n.capability_overrides)
            o[std::to_string(id)] = cap.values;
        doc["capability_overrides"] = o;
    }
    if (heuristics)
        doc["heuristics"] = heuristics->string();
    if (out)
        doc["out"] = out->string();
    if (state_in)
        doc["state_in"] = state_in->string();
    if (!sweep_agents.empty() || !sweep_cmax.empty())
        doc["sweep"] = {{"agents", sweep_agents}, {"cmax", sweep_cmax}};
    return doc;
}

} // namespace agentnet::bench
