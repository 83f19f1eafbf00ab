// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "agentnet/agentnet.h"

namespace {

int exit_code(agentnet_status s) {
    switch (s) {
    case AGENTNET_OK: return 0;
    case AGENTNET_ERR_CONFIG: return 2;
    case AGENTNET_ERR_DATASET: return 3;
    case AGENTNET_ERR_BACKEND: return 4;
    case AGENTNET_ERR_IO: return 5;
    default: return 1;
    }
}

int fail(agentnet_status s) {
    std::cerr << "agentnet: " << agentnet_last_error() << "\n";
    return exit_code(s);
}

struct Overrides {
    std::string config;
    std::vector<std::pair<std::string, std::string>> values;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "run configuration file");
    for (const char* key : {"agents", "alpha", "beta", "theta-w", "k", "cmax", "backend", "script", "dataset",
                            "heuristics", "phase", "ablation", "seed", "out", "state-in"}) {
        const std::string k = key;
        cmd->add_option_function<std::string>(
            "--" + k, [&o, k](const std::string& v) { o.values.emplace_back(k, v); }, "override " + k);
    }
}

agentnet_status build_config(const Overrides& o, agentnet_config** cfg) {
    agentnet_status s = o.config.empty() ? agentnet_config_parse("{}", nullptr, cfg)
                                         : agentnet_config_load(o.config.c_str(), cfg);
    if (s != AGENTNET_OK)
        return s;
    for (const auto& [k, v] : o.values)
        if ((s = agentnet_config_set(*cfg, k.c_str(), v.c_str())) != AGENTNET_OK)
            return s;
    return agentnet_config_validate(*cfg);
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        return std::nullopt;
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_run(const Overrides& o) {
    agentnet_config* cfg = nullptr;
    agentnet_status s = build_config(o, &cfg);
    if (s != AGENTNET_OK) {
        agentnet_config_free(cfg);
        return fail(s);
    }
    agentnet_report* report = nullptr;
    s = agentnet_run(cfg, &report);
    agentnet_config_free(cfg);
    if (s != AGENTNET_OK)
        return fail(s);
    char* summary = nullptr;
    if (agentnet_report_summary(report, &summary) == AGENTNET_OK) {
        std::cout << summary << "\n";
        agentnet_string_free(summary);
    }
    agentnet_report_free(report);
    return 0;
}

int cmd_sweep(const Overrides& o, const std::string& agents, const std::string& cmax) {
    agentnet_config* cfg = nullptr;
    agentnet_status s = build_config(o, &cfg);
    if (s == AGENTNET_OK && !agents.empty())
        s = agentnet_config_set(cfg, "sweep-agents", agents.c_str());
    if (s == AGENTNET_OK && !cmax.empty())
        s = agentnet_config_set(cfg, "sweep-cmax", cmax.c_str());
    char* csv = nullptr;
    if (s == AGENTNET_OK)
        s = agentnet_sweep(cfg, &csv);
    agentnet_config_free(cfg);
    if (s != AGENTNET_OK)
        return fail(s);
    std::cout << csv;
    agentnet_string_free(csv);
    return 0;
}

int cmd_export_dot(const std::string& path, bool include_pruned, std::optional<long> index, const std::string& out) {
    const auto text = read_file(path);
    if (!text) {
        std::cerr << "agentnet: cannot read " << path << "\n";
        return 5;
    }
    // A snapshot file, or a series with one snapshot per line.
    std::string snapshot = *text;
    std::vector<std::string> lines;
    std::istringstream in(*text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line.front() == '{' && line.back() == '}')
            lines.push_back(line);
    if (lines.size() > 1 || index) {
        if (lines.empty()) {
            std::cerr << "agentnet: " << path << " holds no snapshot series\n";
            return 3;
        }
        long i = index ? *index : static_cast<long>(lines.size()) - 1;
        if (i < 0)
            i += static_cast<long>(lines.size());
        if (i < 0 || i >= static_cast<long>(lines.size())) {
            std::cerr << "agentnet: snapshot index out of range\n";
            return 2;
        }
        snapshot = lines[static_cast<std::size_t>(i)];
    }
    char* dot = nullptr;
    const agentnet_status s = agentnet_snapshot_to_dot(snapshot.c_str(), include_pruned ? 1 : 0, &dot);
    if (s != AGENTNET_OK)
        return fail(s);
    if (out.empty()) {
        std::cout << dot;
    } else {
        std::ofstream f(out);
        if (!f) {
            agentnet_string_free(dot);
            std::cerr << "agentnet: cannot write " << out << "\n";
            return 5;
        }
        f << dot;
    }
    agentnet_string_free(dot);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decentralized agent network runner"};
    app.require_subcommand(1);

    Overrides run_opts;
    auto* run = app.add_subcommand("run", "train and/or test a network on a dataset");
    add_overrides(run, run_opts);

    Overrides sweep_opts;
    std::string agents_grid, cmax_grid;
    auto* sweep = app.add_subcommand("sweep", "accuracy over an (agents, cmax) grid");
    add_overrides(sweep, sweep_opts);
    sweep->add_option("--agents-grid", agents_grid, "comma-separated agent counts");
    sweep->add_option("--cmax-grid", cmax_grid, "comma-separated memory capacities");

    std::string snapshot_path, dot_out;
    bool include_pruned = false;
    std::optional<long> index;
    auto* dot = app.add_subcommand("export-dot", "render a graph snapshot as DOT");
    dot->add_option("snapshot", snapshot_path, "snapshot JSON, or a snapshots.jsonl series")->required();
    dot->add_flag("--include-pruned", include_pruned, "draw pruned pairs as dashed arcs");
    dot->add_option("--index", index, "entry of a series (negative counts from the end; default last)");
    dot->add_option("-o,--output", dot_out, "write to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    if (*run)
        return cmd_run(run_opts);
    if (*sweep)
        return cmd_sweep(sweep_opts, agents_grid, cmax_grid);
    return cmd_export_dot(snapshot_path, include_pruned, index, dot_out);
}
