// SPDX-License-Identifier: Apache-2.0
#include "run.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "core/error.hpp"
#include "core/http_backend.hpp"
#include "core/scripted_backend.hpp"
#include "evaluate.hpp"
#include "sim_backend.hpp"

namespace agentnet::bench {
namespace {

std::vector<std::vector<double>> capability_rows(const Network& net) {
    std::vector<std::vector<double>> out;
    for (const auto& a : net.agents())
        out.push_back(a.capability().values);
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::Io, "cannot write " + path.string());
    return out;
}

} // namespace

nlohmann::json RunReport::summary() const {
    std::size_t aborted = 0;
    for (const auto& r : results)
        aborted += r.aborted ? 1 : 0;
    return {{"phase", to_string(phase)},
            {"benchmark", to_string(benchmark)},
            {"ablation", to_string(ablation)},
            {"tasks", results.size()},
            {"correct", correct},
            {"aborted", aborted},
            {"accuracy", accuracy},
            {"snapshots", snapshots.size()},
            {"completion_calls", completion_calls},
            {"embedding_calls", embedding_calls},
            {"warnings", warnings}};
}

RunReport run_phase(PhaseContext& ctx, Phase phase, const std::vector<TaskRecord>& records) {
    if (phase == Phase::TrainTest)
        throw Error(ErrorKind::InvalidConfiguration, "run_phase takes a single phase");
    Network& net = ctx.network;
    RunReport report;
    report.phase = phase;
    report.benchmark = ctx.benchmark;
    report.ablation = ctx.ablation;
    report.taxonomy = net.taxonomy();
    report.snapshots.push_back(net.snapshot());
    report.capabilities.push_back(capability_rows(net));
    const auto calls0 = ctx.backend.completion_calls();
    const auto embeds0 = ctx.backend.embedding_calls();

    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return records[a].priority > records[b].priority; });

    Runtime runtime(net, ctx.backend, &ctx.extractor, ctx.interceptor);
    for (std::size_t i : order) {
        const TaskRecord& rec = records[i];
        TaskResult result{rec.id, rec.category, {}, rec.gold, 0, false, {}};
        try {
            Task task;
            task.id = rec.id;
            task.observation = rec.query;
            task.priority = rec.priority;
            task.requirement = ctx.extractor.extract(rec.query, TaskMetadata{rec.category, rec.difficulty});
            TaskOutcome outcome = runtime.run_task(task);
            result.answer = outcome.answer;
            if (outcome.trace.aborted) {
                result.aborted = true;
                result.error = outcome.trace.error;
            } else {
                result.score = evaluate(ctx.benchmark, outcome.answer, rec.gold);
                if (phase == Phase::Train)
                    runtime.commit_task(outcome.trace, result.score);
            }
            report.traces.push_back(outcome.trace.to_json());
        } catch (const Error& e) {
            result.aborted = true;
            result.error = e.what();
            report.traces.push_back({{"task_id", rec.id}, {"aborted", true}, {"error", e.what()}});
        }
        if (result.aborted)
            report.warnings.push_back("task " + rec.id + " aborted: " + result.error);
        report.correct += static_cast<std::size_t>(result.score);
        report.results.push_back(std::move(result));
        report.snapshots.push_back(net.snapshot());
        report.capabilities.push_back(capability_rows(net));
    }
    if (report.results.empty())
        report.warnings.push_back("no tasks: accuracy reported as 0");
    else
        report.accuracy = static_cast<double>(report.correct) / static_cast<double>(report.results.size());
    report.completion_calls = ctx.backend.completion_calls() - calls0;
    report.embedding_calls = ctx.backend.embedding_calls() - embeds0;
    return report;
}

std::unique_ptr<Backend> make_backend(const RunConfig& config, const HeuristicTable& table) {
    switch (config.backend) {
    case BackendMode::Scripted:
        return std::make_unique<ScriptedBackend>(Script::load(config.script));
    case BackendMode::Http:
        return std::make_unique<HttpBackend>(HttpBackendConfig::from_environment(config.http));
    case BackendMode::Sim: {
        std::map<std::string, std::vector<double>> specialties;
        for (const auto& c : table.categories())
            specialties.emplace(c, table.lookup(c));
        return std::make_unique<SkillSimBackend>(std::move(specialties), config.sim);
    }
    }
    throw Error(ErrorKind::InvalidConfiguration, "unknown backend mode");
}

RunOutput run_config(const RunConfig& config) {
    config.validate();
    const DatasetManifest manifest = DatasetManifest::load(config.dataset);
    const auto heuristics_path = config.heuristics ? config.heuristics : manifest.heuristics;
    if (!heuristics_path)
        throw Error(ErrorKind::InvalidConfiguration, "no heuristic table given by the config or the manifest");
    const HeuristicTable table = HeuristicTable::load(*heuristics_path);

    NetworkConfig net_config = config.network;
    if (!config.taxonomy_set)
        net_config.capability.taxonomy = table.taxonomy();
    else if (net_config.capability.taxonomy != table.taxonomy())
        throw Error(ErrorKind::InvalidConfiguration, "heuristic table taxonomy differs from the configured one");
    net_config.validate();

    // Load records before doing any work so dataset errors fail fast.
    std::vector<TaskRecord> train_records, test_records;
    if (config.phase != Phase::Test)
        train_records = load_dataset(manifest, "train");
    if (config.phase != Phase::Train)
        test_records = load_dataset(manifest, "test");

    auto backend = make_backend(config, table);
    RunOutput out;
    out.network = std::make_unique<Network>(config.state_in ? Network::load_state(*config.state_in, net_config)
                                                            : Network(net_config));
    RequirementExtractor extractor(net_config.capability.taxonomy, table, backend.get());
    std::unique_ptr<AblationPolicy> policy;
    if (config.ablation != AblationMode::None)
        policy = std::make_unique<AblationPolicy>(config.ablation, config.seed);
    PhaseContext ctx{*out.network, *backend, extractor, manifest.kind, policy.get(), config.ablation};

    if (config.phase != Phase::Test)
        out.train = run_phase(ctx, Phase::Train, train_records);
    if (config.phase != Phase::Train)
        out.test = run_phase(ctx, Phase::Test, test_records);

    if (config.out) {
        if (config.phase == Phase::TrainTest) {
            export_report(*out.train, *config.out / "train");
            export_report(*out.test, *config.out / "test");
        } else {
            export_report(out.last(), *config.out);
        }
        if (config.save_state && config.phase != Phase::Test)
            out.network->save_state(*config.out / "state");
        auto f = open_out(*config.out / "config.json");
        f << config.to_json().dump(2) << "\n";
    }
    return out;
}

std::vector<SweepRow> run_sweep(const RunConfig& config) {
    std::vector<std::size_t> agents = config.sweep_agents, cmax = config.sweep_cmax;
    if (agents.empty())
        agents.push_back(config.network.n_agents);
    if (cmax.empty())
        cmax.push_back(config.network.c_max);
    std::vector<SweepRow> rows;
    for (auto n : agents) {
        for (auto c : cmax) {
            RunConfig cell = config;
            cell.network.n_agents = n;
            cell.network.c_max = c;
            cell.state_in.reset();
            cell.sweep_agents.clear();
            cell.sweep_cmax.clear();
            if (config.out)
                cell.out = *config.out / ("agents" + std::to_string(n) + "_cmax" + std::to_string(c));
            const RunOutput result = run_config(cell);
            rows.push_back({n, c, result.last().accuracy, result.last().results.size()});
        }
    }
    if (config.out)
        export_sweep(rows, *config.out);
    return rows;
}

std::vector<std::string> report_files(const RunReport& report) {
    if (report.results.empty())
        return {"summary.json"};
    return {"summary.json", "scores.csv", "abilities.csv", "capability_trajectory.csv", "snapshots.jsonl",
            "traces.jsonl"};
}

void export_report(const RunReport& report, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
    {
        auto f = open_out(dir / "summary.json");
        f << report.summary().dump(2) << "\n";
    }
    if (report.results.empty())
        return;
    {
        auto f = open_out(dir / "scores.csv");
        f << "id,category,score,aborted\n";
        for (const auto& r : report.results)
            f << csv_field(r.id) << "," << csv_field(r.category) << "," << r.score << "," << (r.aborted ? 1 : 0)
              << "\n";
    }
    {
        auto f = open_out(dir / "abilities.csv");
        f << "agent";
        for (const auto& t : report.taxonomy)
            f << "," << t;
        f << "\n";
        const auto& last = report.capabilities.back();
        for (std::size_t a = 0; a < last.size(); ++a) {
            f << a;
            for (double v : last[a])
                f << "," << fmt(v);
            f << "\n";
        }
    }
    {
        auto f = open_out(dir / "capability_trajectory.csv");
        f << "snapshot,agent";
        for (const auto& t : report.taxonomy)
            f << "," << t;
        f << "\n";
        for (std::size_t s = 0; s < report.capabilities.size(); ++s)
            for (std::size_t a = 0; a < report.capabilities[s].size(); ++a) {
                f << s << "," << a;
                for (double v : report.capabilities[s][a])
                    f << "," << fmt(v);
                f << "\n";
            }
    }
    {
        auto f = open_out(dir / "snapshots.jsonl");
        for (const auto& s : report.snapshots)
            f << snapshot_to_json(s).dump() << "\n";
    }
    {
        auto f = open_out(dir / "traces.jsonl");
        for (const auto& t : report.traces)
            f << t.dump() << "\n";
    }
}

void export_sweep(const std::vector<SweepRow>& rows, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
    auto f = open_out(dir / "sweep.csv");
    f << "agents,cmax,tasks,accuracy\n";
    for (const auto& r : rows)
        f << r.agents << "," << r.cmax << "," << r.tasks << "," << fmt(r.accuracy) << "\n";
}

} // namespace agentnet::bench
