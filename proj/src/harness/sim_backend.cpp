// SPDX-License-Identifier: Apache-2.0
#include "sim_backend.hpp"

#include <algorithm>
#include <cstdio>
#include <regex>
#include <sstream>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/vector_math.hpp"

namespace agentnet::bench {
namespace {

struct Memory {
    std::string observation;
    std::string action;
};

struct RouterView {
    std::string stage;
    long agent = -1;
    std::vector<double> capability;
    std::string task;
    bool subtask = false;
    std::vector<std::pair<AgentId, std::vector<double>>> candidates;
    std::vector<Memory> memory;
};

std::vector<double> parse_values(const std::string& line) {
    std::vector<double> out;
    std::size_t pos = 0;
    while ((pos = line.find('=', pos)) != std::string::npos) {
        ++pos;
        out.push_back(std::strtod(line.c_str() + pos, nullptr));
    }
    return out;
}

std::string after(const std::string& line, std::string_view prefix) {
    return line.substr(prefix.size());
}

RouterView parse_prompt(const std::string& prompt) {
    RouterView v;
    std::istringstream in(prompt);
    std::string line;
    enum { None, Candidates, Mem, Other } section = None;
    while (std::getline(in, line)) {
        if (line.starts_with("Stage: ")) {
            v.stage = after(line, "Stage: ");
        } else if (line.starts_with("Agent: ")) {
            v.agent = std::stol(after(line, "Agent: "));
        } else if (line.starts_with("Capabilities: ")) {
            v.capability = parse_values(line);
        } else if (line.starts_with("Task: ")) {
            v.task = after(line, "Task: ");
        } else if (line.starts_with("Subtask: ")) {
            v.subtask = true;
        } else if (line == "Candidates:") {
            section = Candidates;
        } else if (line == "Memory:") {
            section = Mem;
        } else if (line.starts_with("  ") && section == Candidates) {
            static const std::regex cand(R"(^  agent (\d+): (.*)$)");
            std::smatch m;
            if (std::regex_match(line, m, cand))
                v.candidates.emplace_back(static_cast<AgentId>(std::stoul(m[1].str())), parse_values(m[2].str()));
        } else if (line.starts_with("  - observation: ") && section == Mem) {
            const std::string body = after(line, "  - observation: ");
            const auto bar = body.rfind(" | action: ");
            if (bar != std::string::npos)
                v.memory.push_back({body.substr(0, bar), body.substr(bar + 11)});
        } else if (!line.starts_with("  ")) {
            section = Other;
        }
    }
    return v;
}

double fit(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        return 0.0;
    return cosine(a, b);
}

} // namespace

void SimParams::validate() const {
    if (!(cold_success >= 0.0 && cold_success <= 1.0))
        throw Error(ErrorKind::InvalidConfiguration, "sim cold_success must lie in [0,1]");
    if (!(confidence >= 0.0 && confidence <= 1.0))
        throw Error(ErrorKind::InvalidConfiguration, "sim confidence must lie in [0,1]");
    if (!(skilled_success >= 0.0 && skilled_success <= 1.0))
        throw Error(ErrorKind::InvalidConfiguration, "sim skilled_success must lie in [0,1]");
    if (!(analyst_insight >= 0.0 && analyst_insight <= 1.0))
        throw Error(ErrorKind::InvalidConfiguration, "sim analyst_insight must lie in [0,1]");
    if (!(margin >= 0.0 && margin <= 1.0))
        throw Error(ErrorKind::InvalidConfiguration, "sim margin must lie in [0,1]");
    if (embed_dim == 0)
        throw Error(ErrorKind::InvalidConfiguration, "sim embedding dimension must be positive");
}

SkillSimBackend::SkillSimBackend(std::map<std::string, std::vector<double>> specialties, SimParams params)
    : specialties_(std::move(specialties)), params_(params), embedder_(params.seed, params.embed_dim) {
    params_.validate();
    if (specialties_.empty())
        throw Error(ErrorKind::InvalidConfiguration, "simulated model needs at least one specialty");
}

std::optional<std::string> SkillSimBackend::specialty_of(std::string_view text) const {
    for (const auto& [name, req] : specialties_)
        if (text.find("(" + name + ")") != std::string_view::npos)
            return name;
    return std::nullopt;
}

std::optional<std::string> SkillSimBackend::solve(std::string_view observation) {
    const std::string text(observation);
    static const std::regex add(R"(Compute (-?\d+) \+ (-?\d+))");
    static const std::regex reverse(R"re(Reverse the word "([^"]+)")re");
    std::smatch m;
    if (std::regex_search(text, m, add))
        return std::to_string(std::stoll(m[1].str()) + std::stoll(m[2].str()));
    if (std::regex_search(text, m, reverse)) {
        std::string w = m[1].str();
        std::reverse(w.begin(), w.end());
        return w;
    }
    return std::nullopt;
}

std::string SkillSimBackend::route(const std::string& prompt) {
    const RouterView v = parse_prompt(prompt);
    if (v.stage == "reason")
        return "Weighing the fit of agent " + std::to_string(v.agent) + " against the candidates.";
    if (v.subtask)
        return "EXECUTE";
    // An agent is never visited twice within one task, so a repeated agent
    // or a different task text starts a new count.
    if (v.task != current_task_ ||
        std::find(current_visits_.begin(), current_visits_.end(), v.agent) != current_visits_.end()) {
        current_task_ = v.task;
        current_visits_.clear();
    }
    current_visits_.push_back(v.agent);
    const auto specialty = specialty_of(v.task);
    if (!specialty || current_visits_.size() > params_.hop_budget)
        return "EXECUTE";
    const auto& req = specialties_.at(*specialty);

    const double own = fit(v.capability, req);
    std::optional<AgentId> best;
    double best_fit = -1.0;
    for (const auto& [id, cap] : v.candidates) {
        const double f = fit(cap, req);
        if (f > best_fit) {
            best_fit = f;
            best = id;
        }
    }
    if (best && best_fit > own + params_.margin)
        return "FORWARD " + std::to_string(*best);

    for (const auto& m : v.memory) {
        if (specialty_of(m.observation) != specialty)
            continue;
        if (m.action == "EXECUTE")
            return "EXECUTE";
        if (m.action.starts_with("FORWARD ")) {
            const auto t = static_cast<AgentId>(std::strtoul(m.action.c_str() + 8, nullptr, 10));
            for (const auto& c : v.candidates)
                if (c.first == t)
                    return m.action;
        }
    }
    if (own < params_.confidence && best && best_fit >= own - 1e-9)
        return "FORWARD " + std::to_string(*best);
    return "EXECUTE";
}

std::string SkillSimBackend::answer(const std::string& prompt) const {
    const RouterView v = parse_prompt(prompt);
    if (v.stage == "reason")
        return "Working through the task.";
    const auto correct = solve(v.task);
    if (!correct)
        return "(no answer)";
    const auto specialty = specialty_of(v.task);
    std::size_t matching = 0;
    for (const auto& m : v.memory)
        if (specialty && specialty_of(m.observation) == specialty)
            ++matching;
    const double depth = static_cast<double>(std::max<std::size_t>(params_.skill_depth, 1));
    const double p = params_.cold_success + (params_.skilled_success - params_.cold_success) *
                                                std::min(1.0, static_cast<double>(matching) / depth);
    std::uint64_t h = fnv1a64(v.task) ^ (params_.seed * 0x9E3779B97F4A7C15ULL);
    h ^= static_cast<std::uint64_t>(v.agent + 1) * 0xBF58476D1CE4E5B9ULL;
    SplitMix64 rng(h);
    return rng.uniform() < p ? *correct : *correct + "?";
}

std::string SkillSimBackend::do_complete(const CompletionRequest& request) {
    std::lock_guard lock(mutex_);
    const std::string& p = request.user_prompt;
    if (p.starts_with("Role: router"))
        return route(p);
    if (p.starts_with("Role: executor"))
        return answer(p);
    if (p.starts_with("Role: capability-analyst")) {
        const auto line_end = p.find('\n', p.find("Abilities:"));
        const std::string abilities = p.substr(0, line_end);
        const auto dim = 1 + static_cast<std::size_t>(std::count(abilities.begin(), abilities.end(), ','));
        const auto task_at = p.find("\nTask: ");
        const auto specialty =
            task_at == std::string::npos ? std::nullopt : specialty_of(p.substr(task_at, p.find('\n', task_at + 1) - task_at));
        std::string out = "(";
        char buf[32];
        for (std::size_t i = 0; i < dim; ++i) {
            double v = 0.5;
            if (specialty && specialties_.at(*specialty).size() == dim)
                v = params_.analyst_insight * specialties_.at(*specialty)[i] + (1.0 - params_.analyst_insight) * 0.5;
            std::snprintf(buf, sizeof buf, "%s%.4f", i ? ", " : "", v);
            out += buf;
        }
        return out + ")";
    }
    return "No preference.";
}

EmbeddingVector SkillSimBackend::do_embed(std::string_view text) {
    return {embedder_(text), embedder_.model_id()};
}

} // namespace agentnet::bench
