// SPDX-License-Identifier: Apache-2.0
#include "protocol.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>

namespace agentnet {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::string upper(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        lines.emplace_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

// Leading decoration models like to add: "Action:", "**", "-".
std::string strip_decoration(std::string line) {
    line = trim(line);
    while (!line.empty() && (line.front() == '*' || line.front() == '-' || line.front() == '`'))
        line.erase(line.begin());
    while (!line.empty() && (line.back() == '*' || line.back() == '`'))
        line.pop_back();
    line = trim(line);
    const std::string up = upper(line);
    for (const char* prefix : {"ACTION:", "DECISION:"}) {
        const std::string p(prefix);
        if (up.rfind(p, 0) == 0)
            return trim(line.substr(p.size()));
    }
    return line;
}

std::optional<AgentId> parse_id(std::string_view text) {
    std::string s = trim(text);
    if (s.empty())
        return std::nullopt;
    if (!std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }) || s.size() > 9)
        return std::nullopt;
    return static_cast<AgentId>(std::stoul(s));
}

std::string one_line(std::string_view text) {
    std::string out(text);
    std::replace(out.begin(), out.end(), '\n', ' ');
    std::replace(out.begin(), out.end(), '\r', ' ');
    return out;
}

} // namespace

RoutingAction RoutingAction::forward(std::optional<AgentId> target) {
    RoutingAction a;
    a.kind = Kind::Forward;
    a.target = target;
    return a;
}

RoutingAction RoutingAction::execute() { return {}; }

RoutingAction RoutingAction::split(std::vector<std::string> local, std::vector<std::string> delegated) {
    RoutingAction a;
    a.kind = Kind::Split;
    a.local_subtasks = std::move(local);
    a.delegated_subtasks = std::move(delegated);
    return a;
}

const char* to_string(RoutingAction::Kind kind) noexcept {
    switch (kind) {
    case RoutingAction::Kind::Forward: return "forward";
    case RoutingAction::Kind::Split: return "split";
    case RoutingAction::Kind::Execute: return "execute";
    }
    return "unknown";
}

std::optional<RoutingAction> parse_action(std::string_view reply) {
    const auto lines = split_lines(reply);
    std::size_t i = 0;
    while (i < lines.size() && trim(lines[i]).empty())
        ++i;
    if (i == lines.size())
        return std::nullopt;

    const std::string head = strip_decoration(lines[i]);
    const std::string head_up = upper(head);
    const auto space = head_up.find_first_of(" \t");
    const std::string keyword = head_up.substr(0, space);
    std::string rest = space == std::string::npos ? std::string() : trim(head.substr(space));

    if (keyword == "EXECUTE")
        return rest.empty() ? std::optional(RoutingAction::execute()) : std::nullopt;

    if (keyword == "FORWARD") {
        std::string arg = upper(rest);
        if (arg.empty() || arg == "NEXT")
            return RoutingAction::forward();
        if (arg.rfind("AGENT", 0) == 0)
            rest = trim(rest.substr(5));
        if (auto id = parse_id(rest))
            return RoutingAction::forward(*id);
        return std::nullopt;
    }

    if (keyword != "SPLIT" || !rest.empty())
        return std::nullopt;

    std::vector<std::string> local;
    std::vector<std::string> delegated;
    std::vector<std::string>* current = nullptr;
    for (++i; i < lines.size(); ++i) {
        const std::string line = trim(lines[i]);
        const std::string up = upper(line);
        if (up.rfind("LOCAL:", 0) == 0) {
            local.push_back(trim(line.substr(6)));
            current = &local;
        } else if (up.rfind("DELEGATE:", 0) == 0) {
            delegated.push_back(trim(line.substr(9)));
            current = &delegated;
        } else if (!line.empty() && current) {
            current->back() += current->back().empty() ? line : "\n" + line;
        }
    }
    auto drop_empty = [](std::vector<std::string>& v) {
        v.erase(std::remove_if(v.begin(), v.end(), [](const std::string& s) { return s.empty(); }), v.end());
    };
    drop_empty(local);
    drop_empty(delegated);
    if (local.empty() && delegated.empty())
        return std::nullopt;
    return RoutingAction::split(std::move(local), std::move(delegated));
}

std::string render_action(const RoutingAction& action) {
    switch (action.kind) {
    case RoutingAction::Kind::Execute: return "EXECUTE";
    case RoutingAction::Kind::Forward:
        return action.target ? "FORWARD " + std::to_string(*action.target) : std::string("FORWARD next");
    case RoutingAction::Kind::Split: {
        std::string out = "SPLIT";
        for (const auto& s : action.local_subtasks)
            out += "\nLOCAL: " + s;
        for (const auto& s : action.delegated_subtasks)
            out += "\nDELEGATE: " + s;
        return out;
    }
    }
    return {};
}

std::string render_context(const std::vector<ContextEntry>& context) {
    std::string out;
    for (const auto& e : context) {
        if (!out.empty())
            out += '\n';
        out += "[agent " + std::to_string(e.agent) + "] " + one_line(e.text);
    }
    return out;
}

std::string format_vector(const Taxonomy& taxonomy, const std::vector<double>& values) {
    std::string out;
    char buf[32];
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6f", values[i]);
        if (!out.empty())
            out += ' ';
        out += (i < taxonomy.size() ? taxonomy[i] : "d" + std::to_string(i)) + "=" + buf;
    }
    return out;
}

std::string router_system_prompt(AgentId router) {
    return "You are the router of agent " + std::to_string(router) +
           " in a decentralized network of agents. Decide whether this agent executes the task, "
           "forwards it unchanged to a better suited agent, or splits it into subtasks.";
}

std::string executor_system_prompt(AgentId holder) {
    return "You are the executor of agent " + std::to_string(holder) +
           " in a decentralized network of agents. Solve the task and reply with the answer.";
}

namespace {

void write_common(std::ostringstream& out, const PromptInput& in) {
    const Taxonomy& tax = *in.taxonomy;
    out << "Agent: " << in.holder << "\n";
    out << "Capabilities: " << format_vector(tax, in.capability.values) << "\n";
    out << "Task: " << one_line(in.observation) << "\n";
    if (in.subtask)
        out << "Subtask: " << one_line(*in.subtask) << "\n";
    out << "Requirement: " << format_vector(tax, in.requirement.values) << "\n";
    out << "Context:\n";
    if (in.context && !in.context->empty()) {
        for (const auto& e : *in.context)
            out << "  [agent " << e.agent << "] " << one_line(e.text) << "\n";
    } else {
        out << "  (none)\n";
    }
}

void write_memory(std::ostringstream& out, const PromptInput& in) {
    out << "Memory:\n";
    if (in.memory.empty())
        out << "  (none)\n";
    for (const auto& r : in.memory)
        out << "  - observation: " << one_line(r.fragment.observation) << " | action: " << one_line(r.fragment.action)
            << "\n";
}

} // namespace

std::string router_prompt(const PromptInput& in, PromptStage stage, std::string_view reasoning) {
    std::ostringstream out;
    out << "Role: router\n";
    out << "Stage: " << (stage == PromptStage::Reason ? "reason" : "act") << "\n";
    out << "Router: " << in.router << "\n";
    write_common(out, in);
    out << "Candidates:\n";
    if (in.candidates.empty())
        out << "  (none)\n";
    for (const auto& c : in.candidates)
        out << "  agent " << c.id << ": " << format_vector(*in.taxonomy, c.capability.values) << "\n";
    write_memory(out, in);
    if (stage == PromptStage::Reason) {
        out << "Think about whether this agent's abilities fit the task and which candidate fits better.";
    } else {
        out << "Reasoning:\n" << reasoning << "\n";
        out << "Reply with exactly one of:\nFORWARD <agent id>\nEXECUTE\n"
               "SPLIT (then one line per subtask: LOCAL: <subtask you solve> or DELEGATE: <subtask for another "
               "agent>)";
    }
    return out.str();
}

std::string executor_prompt(const PromptInput& in, PromptStage stage, std::string_view reasoning) {
    std::ostringstream out;
    out << "Role: executor\n";
    out << "Stage: " << (stage == PromptStage::Reason ? "reason" : "act") << "\n";
    write_common(out, in);
    write_memory(out, in);
    if (stage == PromptStage::Reason) {
        out << "Work through the " << (in.subtask ? "subtask" : "task") << " step by step.";
    } else {
        out << "Reasoning:\n" << reasoning << "\n";
        out << "Reply with the final answer only.";
    }
    return out.str();
}

} // namespace agentnet
