// SPDX-License-Identifier: Apache-2.0
// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "core/error.hpp"
#include "core/graph_topology.hpp"
#include "core/memory_store.hpp"
#include "core/network.hpp"
#include "core/rng.hpp"
#include "core/runtime.hpp"
#include "core/scripted_backend.hpp"
#include "harness/evaluate.hpp"
#include "harness/run.hpp"
#include "harness/synthetic.hpp"
#include "loopback_server.hpp"

namespace fs = std::filesystem;
using namespace agentnet;
using namespace agentnet::bench;
using nlohmann::json;

namespace {

const fs::path kData = AGENTNET_DATA_DIR;
const fs::path kFixtures = AGENTNET_FIXTURE_DIR;

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Independent reference arithmetic.
double ref_cosine(const std::vector<double>& a, const std::vector<double>& b) {
    long double d = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d += static_cast<long double>(a[i]) * b[i];
        na += static_cast<long double>(a[i]) * a[i];
        nb += static_cast<long double>(b[i]) * b[i];
    }
    if (na == 0 || nb == 0)
        return 0.0;
    return static_cast<double>(d / std::sqrt(na * nb));
}

std::vector<double> random_vec(SplitMix64& rng, std::size_t dim) {
    std::vector<double> v(dim);
    for (auto& x : v)
        x = rng.uniform() * 2.0 - 1.0;
    return v;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x, int prec = 3) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(prec);
    os << x;
    return os.str();
}

std::string sci(double x) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(2) << x;
    return os.str();
}

Outcome ema_algebra() {
    SplitMix64 rng(101);
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double alpha = rng.uniform();
        const double w = rng.uniform();
        // half binary outcomes, half graded
        const double s = i % 2 == 0 ? static_cast<double>(rng.below(2)) : rng.uniform();
        auto g = TopologyGraph::fully_connected(3, TopologyParams{alpha, 0.5, 1.0});
        g.set_weight(1, 2, w);
        const double got = g.update_edge_weight(1, 2, s);
        worst = std::max(worst, std::abs(got - (alpha * w + (1.0 - alpha) * s)));
        worst = std::max(worst, std::abs(g.weight(1, 2) - got));

        const double beta = rng.uniform();
        CapabilityVector c{{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()}};
        CapabilityVector d{{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()}};
        const auto u = update_capability(c, d, beta);
        for (std::size_t j = 0; j < 4; ++j)
            worst = std::max(worst, std::abs(u.values[j] - (beta * c.values[j] + (1.0 - beta) * d.values[j])));
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-12 && secs < 1.0,
            "1000 cases, max error " + sci(worst) + ", " + fmt(secs) + " s"};
}

Outcome prune_oracle() {
    SplitMix64 rng(202);
    const auto t0 = std::chrono::steady_clock::now();
    int mismatches = 0;
    for (int gi = 0; gi < 500; ++gi) {
        const std::size_t n = 1 + rng.below(20);
        auto g = TopologyGraph::fully_connected(n, TopologyParams{0.8, 0.5, 1.0});
        std::map<Edge, double> w;
        for (AgentId i = 0; i < n; ++i)
            for (AgentId j = 0; j < n; ++j) {
                if (i == j)
                    continue;
                // coarse grid so some weights sit exactly on the threshold
                const double x = rng.below(3) == 0 ? static_cast<double>(rng.below(11)) / 10.0 : rng.uniform();
                w[{i, j}] = x;
                g.set_weight(i, j, x);
            }
        const double theta = static_cast<double>(rng.below(11)) / 10.0;
        g.set_theta_w(theta);
        auto brute = [&](double th) {
            EdgeSet e;
            for (const auto& [k, x] : w)
                if (x > th)
                    e.insert(k);
            return e;
        };
        const EdgeSet first = g.prune_edges();
        if (first != brute(theta))
            ++mismatches;
        if (g.prune_edges() != first) // idempotent
            ++mismatches;
        for (const auto& [k, x] : w) // weights survive pruning
            if (g.weight(k.first, k.second) != x)
                ++mismatches;
        const double higher = std::min(1.0, theta + 0.1 * static_cast<double>(1 + rng.below(3)));
        g.set_theta_w(higher);
        const EdgeSet second = g.prune_edges();
        if (!std::includes(first.begin(), first.end(), second.begin(), second.end()) || second != brute(higher))
            ++mismatches;
    }
    const double secs = seconds_since(t0);
    return {mismatches == 0 && secs < 5.0,
            "500 graphs, " + std::to_string(mismatches) + " mismatches, " + fmt(secs) + " s"};
}

Fragment synthetic_fragment(std::size_t i, std::vector<double> embedding, TaskIndex now) {
    Fragment f;
    f.observation = "obs-" + std::to_string(i);
    f.context = "ctx";
    f.action = "act";
    f.embedding = std::move(embedding);
    f.created_at = now;
    f.last_used = now;
    return f;
}

Outcome retrieval_oracle() {
    SplitMix64 rng(303);
    int mismatches = 0;
    for (int si = 0; si < 200; ++si) {
        const std::size_t size = rng.below(101);
        const std::size_t dim = 2 + rng.below(7);
        MemoryModule mem(MemoryRole::Executor, std::max<std::size_t>(size, 1));
        std::vector<std::vector<double>> made;
        for (std::size_t i = 0; i < size; ++i) {
            // every fifth fragment repeats an earlier embedding to force ties
            if (!made.empty() && rng.below(5) == 0)
                made.push_back(made[rng.below(made.size())]);
            else
                made.push_back(random_vec(rng, dim));
            mem.insert_with_eviction(synthetic_fragment(i, made.back(), i), i);
        }
        const std::size_t k = 1 + rng.below(10);
        const auto query = made.empty() || rng.below(4) == 0 ? random_vec(rng, dim) : made[rng.below(made.size())];
        std::vector<std::pair<double, std::uint64_t>> ref;
        for (const auto& f : mem.fragments())
            ref.emplace_back(ref_cosine(query, f.embedding), f.id);
        // higher similarity first, then smaller id; near-equal values count as ties
        std::sort(ref.begin(), ref.end(), [](const auto& a, const auto& b) {
            if (std::abs(a.first - b.first) > 1e-12)
                return a.first > b.first;
            return a.second < b.second;
        });
        if (ref.size() > k)
            ref.resize(k);
        const auto got = mem.rank(query, k);
        if (got.size() != ref.size()) {
            ++mismatches;
            continue;
        }
        for (std::size_t i = 0; i < got.size(); ++i)
            if (got[i].fragment.id != ref[i].second || std::abs(got[i].similarity - ref[i].first) > 1e-12)
                ++mismatches;
    }
    return {mismatches == 0, "200 stores, " + std::to_string(mismatches) + " mismatches"};
}

double ref_utility(const Fragment& f, const std::vector<Fragment>& pool, TaskIndex now) {
    std::uint64_t max_use = 0;
    for (const auto& p : pool)
        max_use = std::max(max_use, p.use_count);
    const double freq = static_cast<double>(f.use_count) / (1.0 + static_cast<double>(max_use));
    const double rec = 1.0 / (1.0 + static_cast<double>(now - std::min(now, f.last_used)));
    double uniq = 1.0;
    bool any = false;
    double best = -2.0;
    for (const auto& p : pool) {
        if (p.id == f.id)
            continue;
        any = true;
        best = std::max(best, ref_cosine(f.embedding, p.embedding));
    }
    if (any)
        uniq = std::clamp(1.0 - best, 0.0, 1.0);
    return (freq + rec + uniq) / 3.0;
}

Outcome capacity_oracle() {
    int violations = 0;
    std::size_t evictions = 0;
    for (std::size_t cmax : {1u, 5u, 40u}) {
        SplitMix64 rng(404 + cmax);
        MemoryModule mem(MemoryRole::Router, cmax);
        for (std::size_t i = 0; i < 10000; ++i) {
            const TaskIndex now = i;
            if (!mem.empty() && rng.below(2) == 0) {
                std::vector<std::uint64_t> ids;
                for (const auto& f : mem.fragments())
                    if (rng.below(3) == 0)
                        ids.push_back(f.id);
                mem.mark_used(ids, now);
            }
            auto cand = synthetic_fragment(i, random_vec(rng, 6), now);
            std::vector<Fragment> pool = mem.fragments();
            const bool full = pool.size() == cmax;
            const auto evicted = mem.insert_with_eviction(cand, now);
            if (mem.size() > cmax)
                ++violations;
            if (!full) {
                if (evicted)
                    ++violations;
                continue;
            }
            if (!evicted) {
                ++violations;
                continue;
            }
            ++evictions;
            // the candidate got the next id; recover it from whichever side holds it
            Fragment placed = *evicted;
            for (const auto& f : mem.fragments())
                if (f.observation == cand.observation)
                    placed = f;
            cand.id = placed.id;
            pool.push_back(cand);
            double min_u = 1e9;
            for (const auto& f : pool)
                min_u = std::min(min_u, ref_utility(f, pool, now));
            if (ref_utility(*evicted, pool, now) > min_u + 1e-12)
                ++violations;
        }
    }
    return {violations == 0,
            "30000 inserts, " + std::to_string(evictions) + " evictions, " + std::to_string(violations) +
                " violations"};
}

std::string adversarial_reply(SplitMix64& rng, std::size_t n) {
    const auto id = [&] { return std::to_string(rng.below(n + 2)); }; // includes ids that do not exist
    switch (rng.below(9)) {
    case 0:
    case 1:
        return "FORWARD " + id();
    case 2:
        return "FORWARD next";
    case 3:
        return "FORWARD agent " + id();
    case 4: {
        std::string s = "SPLIT\nLOCAL: part a";
        for (std::uint64_t i = 0, m = 1 + rng.below(3); i < m; ++i)
            s += "\nDELEGATE: part " + std::to_string(i);
        return s;
    }
    case 5:
        return "SPLIT\nDELEGATE: only delegated";
    case 6:
        return "EXECUTE";
    case 7:
        return "(A)";
    default:
        return "garbage without grammar";
    }
}

bool acyclic(const std::vector<Edge>& edges, std::size_t n) {
    std::vector<std::vector<AgentId>> adj(n);
    std::vector<int> indeg(n, 0);
    for (const auto& [a, b] : edges) {
        adj[a].push_back(b);
        ++indeg[b];
    }
    std::vector<AgentId> stack;
    for (AgentId i = 0; i < n; ++i)
        if (indeg[i] == 0)
            stack.push_back(i);
    std::size_t seen = 0;
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        ++seen;
        for (auto w : adj[v])
            if (--indeg[w] == 0)
                stack.push_back(w);
    }
    return seen == n;
}

Outcome termination() {
    int violations = 0;
    std::size_t tasks = 0;
    std::size_t max_hops = 0;
    for (std::size_t n : {1u, 3u, 5u, 9u}) {
        for (int s = 0; s < 100; ++s) {
            SplitMix64 rng(500 + 1000 * n + s);
            Script script;
            script.kind = Script::Kind::Ordered;
            for (int i = 0; i < 400; ++i)
                script.replies.push_back(adversarial_reply(rng, n));
            script.fallback = "EXECUTE";
            script.embed_seed = static_cast<std::uint64_t>(s);
            ScriptedBackend backend(script);
            NetworkConfig cfg;
            cfg.n_agents = n;
            cfg.topology.alpha = 0.5;
            cfg.k = 2;
            cfg.c_max = 4;
            Network net(cfg);
            Runtime rt(net, backend);
            for (int t = 0; t < 3; ++t) {
                Task task;
                task.id = "adv-" + std::to_string(t);
                task.observation = "Adversarial task " + std::to_string(t);
                task.requirement.values = {rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
                auto outcome = rt.run_task(task);
                ++tasks;
                const auto& tr = outcome.trace;
                std::set<AgentId> uniq(tr.visited.begin(), tr.visited.end());
                if (uniq.size() != tr.visited.size() || tr.visited.size() > n)
                    ++violations;
                std::set<AgentId> targets;
                for (const auto& [a, b] : tr.handoffs) {
                    if (a == b || a >= n || b >= n || b == tr.entry_agent || !targets.insert(b).second)
                        ++violations;
                }
                if (!acyclic(tr.handoffs, n))
                    ++violations;
                max_hops = std::max(max_hops, tr.handoffs.size());
                rt.commit_task(outcome.trace, static_cast<double>(rng.below(2)));
            }
        }
    }
    return {violations == 0, std::to_string(tasks) + " tasks over n in {1,3,5,9}, max handoffs " +
                                 std::to_string(max_hops) + ", " + std::to_string(violations) + " violations"};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("agentnet-acceptance-" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Returns the names of expected files that differ from the run's output.
std::vector<std::string> diff_against_golden(const fs::path& out) {
    const fs::path golden = kData / "scenarios" / "golden";
    std::vector<std::string> bad;
    std::ifstream list(golden / "expected_files.txt");
    std::string name;
    while (std::getline(list, name)) {
        if (name.empty())
            continue;
        if (!fs::exists(out / name) || slurp(out / name) != slurp(golden / "expected" / name))
            bad.push_back(name);
    }
    return bad;
}

Outcome golden_trace() {
    const fs::path golden = kData / "scenarios" / "golden";
    std::vector<std::string> problems;
    for (int run = 0; run < 2; ++run) {
        auto cfg = RunConfig::load(golden / "config.json");
        cfg.out = scratch_dir("golden-" + std::to_string(run));
        run_config(cfg);
        for (const auto& f : diff_against_golden(*cfg.out))
            problems.push_back("scripted run " + std::to_string(run + 1) + ": " + f);
    }

    // Same script served over HTTP.
    for (const char* v : {"AGENTNET_API_BASE", "AGENTNET_API_KEY", "AGENTNET_MODEL", "AGENTNET_EMBED_MODEL"})
        ::unsetenv(v);
    auto cfg = RunConfig::load(golden / "config.json");
    ScriptedBackend inner(Script::load(cfg.script));
    agentnet::testing::LoopbackServer server(inner);
    cfg.backend = BackendMode::Http;
    cfg.http.api_base = server.api_base();
    cfg.http.backoff = std::chrono::milliseconds(1);
    cfg.out = scratch_dir("golden-http");
    run_config(cfg);
    for (const auto& f : diff_against_golden(*cfg.out))
        problems.push_back("http run: " + f);

    std::string detail = "2 scripted runs + 1 loopback HTTP run";
    if (!problems.empty()) {
        detail += "; differing:";
        for (const auto& p : problems)
            detail += " [" + p + "]";
    } else {
        detail += " byte-identical to expected";
    }
    return {problems.empty(), detail};
}

RunConfig synthetic_train_config() {
    auto cfg = RunConfig::load(kData / "configs" / "synthetic.json");
    cfg.phase = Phase::Train;
    cfg.out.reset();
    return cfg;
}

Outcome figure_five() {
    const auto cfg = synthetic_train_config();
    const auto out = run_config(cfg);
    const auto& rep = *out.train;
    Outcome o;
    bool initial_ok = !rep.snapshots.empty();
    for (const auto& [e, w] : rep.snapshots.front().weights)
        initial_ok = initial_ok && std::abs(w - 1.0) < 1e-12;
    initial_ok = initial_ok && rep.snapshots.front().edges.size() == rep.snapshots.front().weights.size();
    const auto& last = rep.snapshots.back();
    const std::size_t pruned = last.weights.size() - last.edges.size();

    const auto table = synthetic_heuristics();
    const auto logic = table.lookup("logic");
    const auto lexical = table.lookup("lexical");
    const auto& caps = rep.capabilities.back();
    bool specialists = false;
    std::string pair;
    for (std::size_t a = 0; a < caps.size() && !specialists; ++a)
        for (std::size_t b = 0; b < caps.size() && !specialists; ++b) {
            if (a == b)
                continue;
            if (ref_cosine(caps[a], caps[b]) < 0.9 && ref_cosine(caps[a], logic) > 0.95 &&
                ref_cosine(caps[b], lexical) > 0.95) {
                specialists = true;
                pair = "agent " + std::to_string(a) + " logic " + fmt(ref_cosine(caps[a], logic)) + ", agent " +
                       std::to_string(b) + " lexical " + fmt(ref_cosine(caps[b], lexical)) + ", mutual " +
                       fmt(ref_cosine(caps[a], caps[b]));
            }
        }
    o.pass = initial_ok && pruned >= 1 && specialists;
    o.detail = std::string("initial weights all 1.00: ") + (initial_ok ? "yes" : "no") + ", pruned edges " +
               std::to_string(pruned) + ", specialists: " + (specialists ? pair : "none") + ", accuracy " +
               fmt(rep.accuracy);
    return o;
}

Outcome ablation_ordering() {
    auto run_mode = [](AblationMode mode, std::uint64_t seed) {
        auto cfg = synthetic_train_config();
        cfg.ablation = mode;
        cfg.seed = seed;
        return run_config(cfg).train->accuracy;
    };
    const double full = run_mode(AblationMode::None, synthetic_train_config().seed);
    std::vector<double> next, all;
    for (std::uint64_t s = 1; s <= 5; ++s) {
        next.push_back(run_mode(AblationMode::RandomNext, s));
        all.push_back(run_mode(AblationMode::RandomAll, s));
    }
    const auto mean = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); };
    const double mn = mean(next), ma = mean(all);
    std::string detail = "full " + fmt(full) + ", random-next mean " + fmt(mn) + " [";
    for (std::size_t i = 0; i < next.size(); ++i)
        detail += (i ? " " : "") + fmt(next[i]);
    detail += "], random-all mean " + fmt(ma) + " [";
    for (std::size_t i = 0; i < all.size(); ++i)
        detail += (i ? " " : "") + fmt(all[i]);
    detail += "]";
    return {full >= mn && mn >= ma, detail};
}

Outcome frozen_test_phase() {
    auto cfg = synthetic_train_config();
    auto trained = run_config(cfg);
    Network& net = *trained.network;
    const Network before = net;
    const auto state_before = net.state_to_json().dump();
    const auto snap_before = serialize_snapshot(net.snapshot());

    const auto manifest = DatasetManifest::load(cfg.dataset);
    const auto table = HeuristicTable::load(*manifest.heuristics);
    const auto records = load_dataset(manifest, "test");
    auto backend = make_backend(cfg, table);
    RequirementExtractor extractor(net.taxonomy(), table, backend.get());
    PhaseContext ctx{net, *backend, extractor, manifest.kind};
    const auto rep = run_phase(ctx, Phase::Test, records);

    const bool same = net == before && net.state_to_json().dump() == state_before &&
                      serialize_snapshot(net.snapshot()) == snap_before;
    return {same && !rep.results.empty(), std::to_string(rep.results.size()) + " test tasks, accuracy " +
                                              fmt(rep.accuracy) + ", state " + (same ? "unchanged" : "CHANGED")};
}

Outcome evaluator_fixture() {
    std::ifstream in(kFixtures / "evaluator_cases.json");
    const auto cases = json::parse(in);
    std::size_t agree = 0;
    std::string first_bad;
    std::map<std::string, int> per_kind;
    for (const auto& c : cases) {
        const int got = evaluate(c.at("kind").get<std::string>(), c.at("answer").get<std::string>(),
                                 c.at("gold").get<std::string>());
        ++per_kind[c.at("kind").get<std::string>()];
        if (got == c.at("expected").get<int>())
            ++agree;
        else if (first_bad.empty())
            first_bad = c.at("kind").get<std::string>() + " '" + c.at("answer").get<std::string>() + "' vs '" +
                        c.at("gold").get<std::string>() + "'";
    }
    bool shape = cases.size() == 60;
    for (const auto& [k, n] : per_kind)
        shape = shape && n == 20;
    std::string detail = std::to_string(agree) + "/" + std::to_string(cases.size()) + " agree";
    if (!first_bad.empty())
        detail += ", first disagreement: " + first_bad;
    return {shape && agree == cases.size(), detail};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"EMA algebra", ema_algebra},
        {"pruning matches brute force", prune_oracle},
        {"top-k retrieval matches oracle", retrieval_oracle},
        {"capacity bound and minimal-utility eviction", capacity_oracle},
        {"routing terminates without revisits", termination},
        {"golden trace reproduction", golden_trace},
        {"topology and specialization emerge", figure_five},
        {"ablation ordering", ablation_ordering},
        {"test phase leaves state untouched", frozen_test_phase},
        {"evaluator fixture agreement", evaluator_fixture},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << criteria[i].first << " ("
                  << o.detail << ")" << std::endl;
    }
    fs::remove_all(fs::temp_directory_path() / ("agentnet-acceptance-" + std::to_string(::getpid())));
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
