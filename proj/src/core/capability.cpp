// SPDX-License-Identifier: Apache-2.0
#include "capability.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "backend.hpp"
#include "error.hpp"
#include "vector_math.hpp"

namespace agentnet {

namespace {

bool in_unit_interval(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

void check_dims(std::size_t a, std::size_t b) {
    if (a != b)
        throw Error(ErrorKind::Shape, "dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

} // namespace

Taxonomy default_taxonomy() { return {"reasoning", "language", "knowledge", "sequence"}; }

void validate_taxonomy(const Taxonomy& taxonomy) {
    if (taxonomy.empty())
        throw Error(ErrorKind::InvalidConfiguration, "ability taxonomy is empty");
    std::set<std::string> seen;
    for (const auto& label : taxonomy)
        if (!seen.insert(label).second)
            throw Error(ErrorKind::InvalidConfiguration, "duplicate ability label '" + label + "'");
}

CapabilityVector CapabilityVector::uniform(std::size_t dim, double value) {
    return {std::vector<double>(dim, value)};
}

void CapabilityParams::validate() const {
    if (!in_unit_interval(beta))
        throw Error(ErrorKind::InvalidConfiguration, "beta must lie in [0,1]");
    validate_taxonomy(taxonomy);
}

HeuristicTable::HeuristicTable(Taxonomy taxonomy, std::map<std::string, std::vector<double>> entries)
    : taxonomy_(std::move(taxonomy)) {
    validate_taxonomy(taxonomy_);
    for (auto& [label, values] : entries) {
        check_dims(values.size(), taxonomy_.size());
        if (!std::all_of(values.begin(), values.end(), in_unit_interval))
            throw Error(ErrorKind::Schema, "requirement for '" + label + "' leaves [0,1]");
        if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; }))
            throw Error(ErrorKind::Schema, "requirement for '" + label + "' is all zeros");
        entries_.emplace(label, std::move(values));
    }
}

HeuristicTable HeuristicTable::from_json(const nlohmann::json& doc) {
    try {
        return HeuristicTable(doc.at("taxonomy").get<Taxonomy>(),
                              doc.at("categories").get<std::map<std::string, std::vector<double>>>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Schema, std::string("malformed heuristic table: ") + e.what());
    }
}

HeuristicTable HeuristicTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open heuristic table " + path.string());
    try {
        return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
    }
}

nlohmann::json HeuristicTable::to_json() const {
    nlohmann::json cats = nlohmann::json::object();
    for (const auto& [label, values] : entries_)
        cats[label] = values;
    return {{"taxonomy", taxonomy_}, {"categories", std::move(cats)}};
}

bool HeuristicTable::contains(std::string_view category) const { return entries_.find(category) != entries_.end(); }

const std::vector<double>& HeuristicTable::lookup(std::string_view category) const {
    auto it = entries_.find(category);
    if (it == entries_.end())
        throw Error(ErrorKind::UnknownCategory, "no heuristic for category '" + std::string(category) + "'");
    return it->second;
}

std::vector<std::string> HeuristicTable::categories() const {
    std::vector<std::string> out;
    for (const auto& [label, _] : entries_)
        out.push_back(label);
    return out;
}

void HeuristicTable::merge(const HeuristicTable& other) {
    if (taxonomy_.empty())
        taxonomy_ = other.taxonomy_;
    if (other.taxonomy_ != taxonomy_)
        throw Error(ErrorKind::Shape, "cannot merge heuristic tables over different taxonomies");
    for (const auto& [label, values] : other.entries_)
        entries_[label] = values;
}

RequirementExtractor::RequirementExtractor(Taxonomy taxonomy, HeuristicTable table, Backend* backend)
    : taxonomy_(std::move(taxonomy)), table_(std::move(table)), backend_(backend) {
    validate_taxonomy(taxonomy_);
    if (!table_.taxonomy().empty() && table_.taxonomy() != taxonomy_)
        throw Error(ErrorKind::Shape, "heuristic table taxonomy differs from the run taxonomy");
}

ExtractionMode RequirementExtractor::mode_for(const TaskMetadata& metadata) const {
    if (metadata.category && table_.contains(*metadata.category))
        return ExtractionMode::Atomic;
    return ExtractionMode::Compound;
}

std::string RequirementExtractor::analysis_prompt(std::string_view observation) const {
    std::ostringstream out;
    out << "Role: capability-analyst\n";
    out << "Abilities: ";
    for (std::size_t i = 0; i < taxonomy_.size(); ++i)
        out << (i ? ", " : "") << taxonomy_[i];
    out << "\nTask: " << observation << "\n";
    out << "Rate how much the task demands each ability on a 0 to 1 scale. "
           "Answer with one tuple in the order listed, e.g. (";
    for (std::size_t i = 0; i < taxonomy_.size(); ++i)
        out << (i ? ", " : "") << "0.5";
    out << ").";
    return out.str();
}

TaskRequirement RequirementExtractor::extract(std::string_view observation, const TaskMetadata& metadata,
                                              ExtractionMode mode) const {
    if (observation.empty())
        throw Error(ErrorKind::InvalidConfiguration, "task observation is empty");
    if (mode == ExtractionMode::Atomic) {
        if (!metadata.category)
            throw Error(ErrorKind::UnknownCategory, "atomic extraction needs a category label");
        return {table_.lookup(*metadata.category), RequirementSource::Atomic};
    }
    if (!backend_)
        throw Error(ErrorKind::Backend, "compound extraction needs a model backend");
    CompletionRequest request;
    request.system_prompt = "You analyze which abilities a task requires.";
    request.user_prompt = analysis_prompt(observation);
    const std::string reply = backend_->complete(request);
    return {parse_requirement_reply(reply, taxonomy_.size()), RequirementSource::Compound};
}

std::vector<double> parse_requirement_reply(std::string_view reply, std::size_t dim) {
    std::size_t pos = 0;
    while (pos < reply.size()) {
        const auto open = reply.find_first_of("([", pos);
        if (open == std::string_view::npos)
            break;
        const char close_ch = reply[open] == '(' ? ')' : ']';
        const auto close = reply.find(close_ch, open + 1);
        if (close == std::string_view::npos)
            break;
        std::string body(reply.substr(open + 1, close - open - 1));
        std::vector<double> values;
        bool ok = true;
        std::stringstream parts(body);
        std::string item;
        while (std::getline(parts, item, ',')) {
            const auto first = item.find_first_not_of(" \t\r\n");
            const auto last = item.find_last_not_of(" \t\r\n");
            if (first == std::string::npos) {
                ok = false;
                break;
            }
            item = item.substr(first, last - first + 1);
            char* end = nullptr;
            const double v = std::strtod(item.c_str(), &end);
            if (end != item.c_str() + item.size() || !std::isfinite(v)) {
                ok = false;
                break;
            }
            values.push_back(v);
        }
        if (ok && values.size() == dim) {
            for (double& v : values)
                v = std::max(v, 0.0);
            const double top = *std::max_element(values.begin(), values.end());
            if (top == 0.0)
                throw ExtractionError("requirement vector is all zeros", std::string(reply));
            if (top > 1.0)
                for (double& v : values)
                    v /= top;
            return values;
        }
        pos = open + 1;
    }
    throw ExtractionError("no " + std::to_string(dim) + "-value tuple in model reply", std::string(reply));
}

double similarity(const TaskRequirement& req, const CapabilityVector& cap) {
    return cosine(req.values, cap.values);
}

AgentId select_initial_agent(const TaskRequirement& req, std::span<const AgentProfile> agents) {
    if (agents.empty())
        throw Error(ErrorKind::NoAgents, "no agents to select from");
    auto choice = select_next_agent(req, agents, {});
    return *choice;
}

std::optional<AgentId> select_next_agent(const TaskRequirement& req, std::span<const AgentProfile> candidates,
                                         const std::set<AgentId>& exclude) {
    std::optional<AgentId> best;
    double best_sim = 0.0;
    for (const auto& agent : candidates) {
        if (exclude.contains(agent.id))
            continue;
        const double s = similarity(req, agent.capability);
        if (!best || s > best_sim || (s == best_sim && agent.id < *best)) {
            best = agent.id;
            best_sim = s;
        }
    }
    return best;
}

CapabilityVector update_capability(const CapabilityVector& cap, const CapabilityVector& delta, double beta) {
    check_dims(cap.values.size(), delta.values.size());
    if (!in_unit_interval(beta))
        throw Error(ErrorKind::OutOfRange, "beta must lie in [0,1]");
    CapabilityVector out;
    out.values.resize(cap.values.size());
    for (std::size_t i = 0; i < cap.values.size(); ++i)
        out.values[i] = beta * cap.values[i] + (1.0 - beta) * delta.values[i];
    return out;
}

const char* to_string(TaskRole role) noexcept {
    switch (role) {
    case TaskRole::Executed: return "executed";
    case TaskRole::Split: return "split";
    case TaskRole::ForwardedOnly: return "forwarded-only";
    }
    return "unknown";
}

CapabilityVector compute_delta(const TaskRequirement& req, double eval_score, TaskRole role) {
    if (!in_unit_interval(eval_score))
        throw Error(ErrorKind::OutOfRange, "evaluation score must lie in [0,1]");
    CapabilityVector delta = CapabilityVector::uniform(req.values.size(), 0.0);
    if (role == TaskRole::ForwardedOnly)
        return delta;
    for (std::size_t i = 0; i < req.values.size(); ++i)
        delta.values[i] = eval_score * req.values[i];
    return delta;
}

} // namespace agentnet
