// SPDX-License-Identifier: Apache-2.0
#include "agentnet/agentnet.h"

#include <cstring>
#include <set>
#include <sstream>
#include <string>

#include "core/error.hpp"
#include "core/graph_topology.hpp"
#include "harness/evaluate.hpp"
#include "harness/run.hpp"

using namespace agentnet;
using namespace agentnet::bench;

struct agentnet_config {
    RunConfig config;
};

struct agentnet_report {
    RunOutput output;
};

namespace {

thread_local std::string g_last_error;

agentnet_status status_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::Schema: return AGENTNET_ERR_DATASET;
    case ErrorKind::Io: return AGENTNET_ERR_IO;
    case ErrorKind::Backend:
    case ErrorKind::ScriptUnderrun:
    case ErrorKind::Extraction: return AGENTNET_ERR_BACKEND;
    default: return AGENTNET_ERR_CONFIG;
    }
}

template <class F>
agentnet_status guarded(F&& f, agentnet_status parse_status = AGENTNET_ERR_DATASET) {
    g_last_error.clear();
    try {
        f();
        return AGENTNET_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        const auto s = status_for(e.kind());
        return s == AGENTNET_ERR_DATASET ? parse_status : s;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return AGENTNET_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return AGENTNET_ERR_INTERNAL;
    }
}

agentnet_status argument_error(const char* what) {
    g_last_error = what;
    return AGENTNET_ERR_ARGUMENT;
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out)
        std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::size_t to_size(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size() || v < 0)
        throw Error(ErrorKind::InvalidConfiguration, key + " expects a non-negative integer, got '" + value + "'");
    return static_cast<std::size_t>(v);
}

double to_real(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size())
        throw Error(ErrorKind::InvalidConfiguration, key + " expects a number, got '" + value + "'");
    return v;
}

} // namespace

extern "C" {

const char* agentnet_version(void) { return "1.0.0"; }

const char* agentnet_last_error(void) { return g_last_error.c_str(); }

void agentnet_string_free(char* s) { std::free(s); }

agentnet_status agentnet_config_load(const char* path, agentnet_config** out) {
    if (!path || !out)
        return argument_error("null argument");
    return guarded(
        [&] {
            auto c = std::make_unique<agentnet_config>();
            c->config = RunConfig::load(path);
            *out = c.release();
        },
        AGENTNET_ERR_CONFIG);
}

agentnet_status agentnet_config_parse(const char* json, const char* base_dir, agentnet_config** out) {
    if (!json || !out)
        return argument_error("null argument");
    return guarded(
        [&] {
            nlohmann::json doc;
            try {
                doc = nlohmann::json::parse(json);
            } catch (const nlohmann::json::parse_error& e) {
                throw Error(ErrorKind::InvalidConfiguration, e.what());
            }
            auto c = std::make_unique<agentnet_config>();
            c->config = RunConfig::from_json(doc, base_dir ? base_dir : "");
            *out = c.release();
        },
        AGENTNET_ERR_CONFIG);
}

agentnet_status agentnet_config_set(agentnet_config* config, const char* key_c, const char* value_c) {
    if (!config || !key_c || !value_c)
        return argument_error("null argument");
    static const std::set<std::string> known = {"agents", "alpha", "beta", "theta-w", "k", "cmax",
                                                "backend", "script", "dataset", "heuristics", "phase",
                                                "ablation", "seed", "out", "state-in", "sweep-agents",
                                                "sweep-cmax"};
    if (!known.count(key_c))
        return argument_error((std::string("unknown config key '") + key_c + "'").c_str());
    return guarded(
        [&] {
            const std::string key = key_c, value = value_c;
            RunConfig& c = config->config;
            if (key == "agents")
                c.network.n_agents = to_size(key, value);
            else if (key == "alpha")
                c.network.topology.alpha = to_real(key, value);
            else if (key == "beta")
                c.network.capability.beta = to_real(key, value);
            else if (key == "theta-w")
                c.network.topology.theta_w = to_real(key, value);
            else if (key == "k")
                c.network.k = to_size(key, value);
            else if (key == "cmax")
                c.network.c_max = to_size(key, value);
            else if (key == "backend")
                c.backend = parse_backend_mode(value);
            else if (key == "script")
                c.script = value;
            else if (key == "dataset")
                c.dataset = value;
            else if (key == "heuristics")
                c.heuristics = value;
            else if (key == "phase")
                c.phase = parse_phase(value);
            else if (key == "ablation")
                c.ablation = parse_ablation(value);
            else if (key == "seed")
                c.seed = to_size(key, value);
            else if (key == "out")
                c.out = value;
            else if (key == "state-in")
                c.state_in = value;
            else if (key == "sweep-agents" || key == "sweep-cmax") {
                std::vector<std::size_t> grid;
                std::stringstream in(value);
                std::string item;
                while (std::getline(in, item, ','))
                    grid.push_back(to_size(key, item));
                (key == "sweep-agents" ? c.sweep_agents : c.sweep_cmax) = grid;
            }
            else
                throw Error(ErrorKind::InvalidConfiguration, "unknown config key '" + key + "'");
        },
        AGENTNET_ERR_CONFIG);
}

agentnet_status agentnet_config_validate(const agentnet_config* config) {
    if (!config)
        return argument_error("null argument");
    return guarded([&] { config->config.validate(); }, AGENTNET_ERR_CONFIG);
}

agentnet_status agentnet_config_to_json(const agentnet_config* config, char** out) {
    if (!config || !out)
        return argument_error("null argument");
    return guarded([&] { *out = dup(config->config.to_json().dump(2)); });
}

void agentnet_config_free(agentnet_config* config) { delete config; }

agentnet_status agentnet_run(const agentnet_config* config, agentnet_report** out) {
    if (!config || !out)
        return argument_error("null argument");
    return guarded([&] {
        auto r = std::make_unique<agentnet_report>();
        r->output = run_config(config->config);
        *out = r.release();
    });
}

double agentnet_report_accuracy(const agentnet_report* report) {
    return report ? report->output.last().accuracy : 0.0;
}

size_t agentnet_report_task_count(const agentnet_report* report) {
    return report ? report->output.last().results.size() : 0;
}

agentnet_status agentnet_report_summary(const agentnet_report* report, char** out) {
    if (!report || !out)
        return argument_error("null argument");
    return guarded([&] {
        nlohmann::json doc = nlohmann::json::object();
        if (report->output.train)
            doc["train"] = report->output.train->summary();
        if (report->output.test)
            doc["test"] = report->output.test->summary();
        *out = dup(doc.dump(2));
    });
}

agentnet_status agentnet_report_final_snapshot(const agentnet_report* report, char** out) {
    if (!report || !out)
        return argument_error("null argument");
    return guarded([&] { *out = dup(serialize_snapshot(report->output.network->snapshot())); });
}

agentnet_status agentnet_report_export(const agentnet_report* report, const char* dir) {
    if (!report || !dir)
        return argument_error("null argument");
    return guarded([&] {
        const auto& o = report->output;
        if (o.train && o.test) {
            export_report(*o.train, std::filesystem::path(dir) / "train");
            export_report(*o.test, std::filesystem::path(dir) / "test");
        } else {
            export_report(o.last(), dir);
        }
    });
}

void agentnet_report_free(agentnet_report* report) { delete report; }

agentnet_status agentnet_sweep(const agentnet_config* config, char** csv_out) {
    if (!config || !csv_out)
        return argument_error("null argument");
    return guarded([&] {
        const auto rows = run_sweep(config->config);
        std::ostringstream csv;
        csv << "agents,cmax,tasks,accuracy\n";
        char buf[32];
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof buf, "%.6f", r.accuracy);
            csv << r.agents << "," << r.cmax << "," << r.tasks << "," << buf << "\n";
        }
        *csv_out = dup(csv.str());
    });
}

agentnet_status agentnet_snapshot_to_dot(const char* snapshot_json, int include_pruned, char** out) {
    if (!snapshot_json || !out)
        return argument_error("null argument");
    return guarded([&] { *out = dup(snapshot_to_dot(parse_snapshot(snapshot_json), include_pruned != 0)); });
}

agentnet_status agentnet_evaluate(const char* kind, const char* answer, const char* gold, int* score) {
    if (!kind || !answer || !gold || !score)
        return argument_error("null argument");
    return guarded([&] { *score = evaluate(std::string_view(kind), answer, gold); }, AGENTNET_ERR_CONFIG);
}

} // extern "C"
