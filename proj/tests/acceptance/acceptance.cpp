// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors
//
// Acceptance suite: one PASS / FAIL / SKIP line per primary criterion.
// Exit status is non-zero when any criterion fails.

#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "taxolint/error.hpp"
#include "taxolint/server.hpp"

using namespace taxolint;
using namespace taxolint::testing;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances and budgets.
constexpr double kDriftTol = 1e-9;
constexpr double kDriftTimeBudgetS = 1.0;
constexpr double kAnalyticExactTol = 1e-9;
constexpr double kAnalyticHalfTol = 1e-4;
constexpr double kTable1Tol = 0.10;
constexpr double kCmeTimeBudgetS = 30.0;
constexpr double kG1Tol = 1e-9;
constexpr double kAggregationTol = 1e-12;
constexpr double kIngestTimeBudgetS = 60.0;
constexpr long kIngestMemoryBudgetKiB = 1024L * 1024L;
constexpr double kMatrixTol = 1e-6;

enum class Status { Pass, Fail, Skip };

struct Outcome {
    Status status = Status::Pass;
    std::string detail;
};

// Collects sub-check failures; the criterion passes only when none fail.
class Checks {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok) failures_.push_back(what);
    }
    void note(const std::string& s) { notes_.push_back(s); }
    Outcome outcome() const {
        std::ostringstream out;
        const auto& parts = failures_.empty() ? notes_ : failures_;
        for (std::size_t i = 0; i < parts.size(); ++i) out << (i ? "; " : "") << parts[i];
        return {failures_.empty() ? Status::Pass : Status::Fail, out.str()};
    }

private:
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;
};

std::string fmt(double v, int precision = 6) {
    std::ostringstream out;
    out.precision(precision);
    out << v;
    return out.str();
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Embedding random_unit(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> normal;
    std::vector<double> v(dim);
    double norm = 0;
    for (auto& x : v) {
        x = normal(rng);
        norm += x * x;
    }
    norm = std::sqrt(norm);
    Embedding out(dim);
    for (std::size_t i = 0; i < dim; ++i) out[i] = static_cast<float>(v[i] / norm);
    return out;
}

// Independent evaluation in long double.
long double oracle_drift(const Embedding& e, const std::vector<Embedding>& parents) {
    const std::size_t d = e.size();
    std::vector<long double> mean(d, 0.0L);
    for (const auto& p : parents)
        for (std::size_t i = 0; i < d; ++i) mean[i] += p[i];
    for (auto& m : mean) m /= static_cast<long double>(parents.size());
    long double dot = 0, ne = 0, nm = 0;
    for (std::size_t i = 0; i < d; ++i) {
        dot += e[i] * mean[i];
        ne += static_cast<long double>(e[i]) * e[i];
        nm += mean[i] * mean[i];
    }
    const long double cos = dot / (std::sqrt(ne) * std::sqrt(nm));
    return (1.0L - cos) * std::log(static_cast<long double>(parents.size()) + 1.0L);
}

// ---------------------------------------------------------------------------

Outcome drift_math() {
    Checks c;
    std::mt19937_64 rng(20260101);
    std::uniform_int_distribution<std::size_t> dims(8, 96), counts(2, 12);
    const auto start = Clock::now();
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto d = dims(rng);
        const auto e = random_unit(rng, d);
        std::vector<Embedding> parents(counts(rng));
        for (auto& p : parents) p = random_unit(rng, d);
        const auto got = compute_drift(e, parents);
        const double want = static_cast<double>(oracle_drift(e, parents));
        worst = std::max(worst, std::abs(got.drift_adj - want));
        const double ratio = got.drift_adj / got.drift_raw;
        worst = std::max(worst, std::abs(ratio - std::log(parents.size() + 1.0)) * got.drift_raw);
        if (got.n != parents.size()) c.expect(false, "n mismatch in case " + std::to_string(i));
        if (got.flagged != (got.drift_adj >= kDefaultDriftThreshold))
            c.expect(false, "flag rule mismatch in case " + std::to_string(i));
    }
    const double elapsed = seconds_since(start);
    c.expect(worst <= kDriftTol, "max |error| " + fmt(worst) + " > " + fmt(kDriftTol));
    c.expect(elapsed < kDriftTimeBudgetS, "runtime " + fmt(elapsed) + " s");

    // Boundary: n = 2, cos chosen so that drift_adj lands on 0.60.
    const double cos = 1.0 - 0.6 / std::log(3.0);
    const Embedding parent{1.0f, 0.0f};
    const Embedding e{static_cast<float>(cos), static_cast<float>(std::sqrt(1 - cos * cos))};
    const std::vector<Embedding> ps{parent, parent};
    const auto near = compute_drift(e, ps);
    c.expect(std::abs(near.drift_adj - 0.6) < 1e-6, "boundary construction off: " + fmt(near.drift_adj, 12));
    const auto at = compute_drift(e, ps, near.drift_adj);
    c.expect(at.flagged, "drift_adj equal to the threshold is not flagged");
    const auto above = compute_drift(e, ps, std::nextafter(near.drift_adj, 1.0));
    c.expect(!above.flagged, "drift_adj just below the threshold is flagged");
    c.note("1000 cases, max |error| " + fmt(worst, 3) + ", " + fmt(elapsed * 1000, 3) + " ms; boundary 0.60 flagged");
    return c.outcome();
}

Outcome analytic_drift() {
    Checks c;
    const Embedding x{1, 0, 0}, y{0, 1, 0}, z{0, 0, 1};
    const auto same = compute_drift(x, std::vector<Embedding>{x, x, x});
    c.expect(std::abs(same.drift_adj) <= kAnalyticExactTol, "identical vectors: " + fmt(same.drift_adj, 12));

    const auto ortho = compute_drift(x, std::vector<Embedding>{y, z, y});
    c.expect(std::abs(ortho.drift_adj - std::log(4.0)) <= kAnalyticExactTol,
             "orthogonal n=3: " + fmt(ortho.drift_adj, 12));
    c.expect(std::abs(ortho.drift_adj - 1.3863) <= 1e-4, "orthogonal n=3 is not 1.3863");

    const Embedding half{0.5f, static_cast<float>(std::sqrt(3.0) / 2), 0};
    const auto h = compute_drift(half, std::vector<Embedding>{x, x});
    c.expect(std::abs(h.drift_adj - 0.5493) <= kAnalyticHalfTol, "cos 0.5 n=2: " + fmt(h.drift_adj, 8));
    c.note("0, " + fmt(ortho.drift_adj, 6) + ", " + fmt(h.drift_adj, 6));
    return c.outcome();
}

// Networked: TAXOLINT_NETWORK_TESTS=1 and TAXOLINT_EMBEDDINGS_ENDPOINT pointing
// at a server that exposes the reference model.
Outcome table1() {
    const char* net = std::getenv("TAXOLINT_NETWORK_TESTS");
    const char* endpoint = std::getenv("TAXOLINT_EMBEDDINGS_ENDPOINT");
    if (!net || !*net || !endpoint || !*endpoint || offline_from_env())
        return {Status::Skip, "offline (set TAXOLINT_NETWORK_TESTS=1 and TAXOLINT_EMBEDDINGS_ENDPOINT)"};

    Checks c;
    const std::pair<std::uint64_t, double> expected[] = {{5376341, 0.196}, {16638398, 0.681}, {7040449, 1.482}};
    WikidataClientOptions wo;
    wo.offline = false;
    WikidataClient client(wo);
    RemoteProviderOptions ro;
    ro.endpoint = endpoint;
    RemoteProvider provider(ro);
    EmbeddingCache cache(provider.dimension());
    Embedder embedder(provider, cache);

    std::vector<double> got;
    for (auto [qid, want] : expected) {
        const auto e = client.fetch(Q(qid));
        GraphBuilder b;
        TextIndex texts;
        if (e.text) texts.add(*e.text);
        for (const auto& r : e.edges) {
            b.add(r.edge());
            if (auto p = client.fetch(r.parent); p.text) texts.add(*p.text);
        }
        const auto clean = clean_relations(std::move(b).finalize(), MetaclassPolicy::defaults()).graph;
        const std::vector<EntityId> one{Q(qid)};
        auto result = scan_drift(clean, texts, embedder, one, {});
        if (result.records.empty()) {
            c.expect(false, Q(qid).str() + " produced no drift record");
            got.push_back(std::nan(""));
            continue;
        }
        const double adj = result.records[0].drift_adj;
        got.push_back(adj);
        c.expect(std::abs(adj - want) <= kTable1Tol, Q(qid).str() + " = " + fmt(adj, 4) + ", want " + fmt(want, 4));
    }
    c.expect(got[0] < got[1] && got[1] < got[2], "ordering not preserved");
    c.note(fmt(got[0], 4) + " / " + fmt(got[1], 4) + " / " + fmt(got[2], 4));
    return c.outcome();
}

std::set<OracleFlag> as_oracle_set(const std::vector<AntiPatternFlag>& flags) {
    std::set<OracleFlag> out;
    for (const auto& f : flags) out.insert({f.entity, std::string(tag_name(f.tag)), f.redundant_parent.value_or(EntityId{})});
    return out;
}

Outcome cme_oracle() {
    Checks c;
    const auto start = Clock::now();
    std::size_t tp = 0, fp = 0, fn = 0;
    std::mt19937_64 sizes(7);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        RandomGraphSpec spec;
        spec.nodes = std::uniform_int_distribution<std::size_t>(20, 200)(sizes);
        spec.edges = spec.nodes * 2;
        const auto edges = random_edges(seed, spec);
        const auto g = build_graph(edges);
        const EdgeListModel m(edges);
        std::set<EntityId> abstract_ids;
        if (!edges.empty()) abstract_ids.insert(edges[seed % edges.size()].parent);
        MetaclassPolicy policy;
        policy.abstract_class_ids = abstract_ids;
        const auto got = as_oracle_set(detect_anti_patterns(g, policy));
        const auto want = oracle_flags(m, abstract_ids);
        for (const auto& f : got) (want.count(f) ? tp : fp)++;
        for (const auto& f : want)
            if (!got.count(f)) ++fn;
    }
    const double elapsed = seconds_since(start);
    const double precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 1.0;
    const double recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 1.0;
    c.expect(fp == 0 && fn == 0, "precision " + fmt(precision) + ", recall " + fmt(recall));
    c.expect(elapsed < kCmeTimeBudgetS, "runtime " + fmt(elapsed) + " s");
    c.note("100 graphs, " + std::to_string(tp) + " flags, precision = recall = 1, " + fmt(elapsed, 3) + " s");
    return c.outcome();
}

PipelineConfig g1_config(const std::filesystem::path& out) {
    PipelineConfig cfg;
    cfg.triples = data_dir() / "g1_triples.tsv";
    cfg.texts = data_dir() / "g1_texts.tsv";
    cfg.out_dir = out;
    cfg.risk.root = Q(1);
    return cfg;
}

Outcome g1_end_to_end() {
    Checks c;
    TempDir tmp("accept-g1");
    const auto cfg = g1_config(tmp.path());
    run_all(cfg);

    std::ifstream flags_in(cfg.artifact(artifact::kFlags));
    const auto flags = read_flags_csv(flags_in);
    std::set<std::pair<std::string, std::string>> got;
    for (const auto& f : flags) got.insert({f.entity.str(), f.tag});
    const std::set<std::pair<std::string, std::string>> want = {
        {"Q6", "DualRole"}, {"Q7", "CycleMember"}, {"Q8", "CycleMember"}, {"Q9", "RedundantEdge"}};
    c.expect(flags.size() == 4 && got == want, "flags differ: " + std::to_string(flags.size()) + " rows");

    std::ifstream risk_in(cfg.artifact(artifact::kRisk));
    const auto risk = read_risk_csv(risk_in);
    auto q4 = std::find_if(risk.begin(), risk.end(), [](const RiskReport& r) { return r.entity == Q(4); });
    if (q4 == risk.end()) {
        c.expect(false, "no Q4 risk row");
    } else {
        c.expect(std::abs(q4->aggregate - 0.05) <= kG1Tol, "Q4 aggregate " + fmt(q4->aggregate, 10) + ", want 0.05");
    }

    // Distances from the library and from the Floyd-Warshall oracle.
    const EdgeListModel m(g1_edges());
    const auto und = m.floyd_warshall(EdgeListModel::Walk::Undirected);
    const auto g = g1();
    const auto lib23 = bounded_bfs_distance(g, Q(2), Q(3), 10, PathMode::UndirectedUnion);
    c.expect(und[m.idx(Q(2))][m.idx(Q(3))] == 2 && lib23 == 2u, "Q2-Q3 distance is not 2");
    const auto clean = clean_relations(g, MetaclassPolicy::defaults()).graph;
    RiskScorer scorer(clean, cfg.risk);
    const auto q4_report = scorer.score(Q(4));
    c.expect(q4_report.raw_parent_distances == std::vector<HopCount>{2}, "Q4 parent distances are not {2}");
    const auto q6 = scorer.score(Q(6));
    c.expect(q6.cross_distance == 1u && und[m.idx(Q(2))][m.idx(Q(4))] == 1, "Q6 cross-distance is not 1");

    const auto labeling = weakly_connected_components(g);
    const auto reps = m.union_find_representatives();
    const std::set<int> distinct(reps.begin(), reps.end());
    c.expect(labeling.component_count() == 2 && distinct.size() == 2, "component count is not 2");
    c.expect(entry_points(g, labeling, labeling.component_of[g.index_of(Q(1))]) == std::vector<EntityId>{Q(1)},
             "entry points of the main component are not {Q1}");
    c.expect(read_file(cfg.artifact(artifact::kComponents)) == "component,size,entry_points\n0,7,Q1\n1,2,\n",
             "components.csv differs");
    c.note("4 flags, Q4 aggregate 0.05, distances 2 and 1, 2 components, entry {Q1}");
    return c.outcome();
}

Outcome graph_primitives() {
    Checks c;
    std::mt19937_64 rng(11);
    std::size_t pairs = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        RandomGraphSpec spec;
        spec.nodes = std::uniform_int_distribution<std::size_t>(10, 200)(rng);
        spec.edges = spec.nodes * 3 / 2;
        spec.plant_patterns = seed % 2 == 0;
        const auto edges = random_edges(seed + 1000, spec);
        const auto g = build_graph(edges);
        const EdgeListModel m(edges);
        const int n = m.size();
        const std::pair<EdgeListModel::Walk, PathMode> modes[] = {
            {EdgeListModel::Walk::Undirected, PathMode::UndirectedUnion},
            {EdgeListModel::Walk::UpSubclass, PathMode::UpwardSubclass},
            {EdgeListModel::Walk::UpUnion, PathMode::UpwardUnion}};
        for (auto [walk, mode] : modes) {
            const auto d = m.floyd_warshall(walk);
            std::uniform_int_distribution<int> pick(0, n - 1);
            for (int k = 0; k < 300; ++k) {
                const int a = pick(rng), b = pick(rng);
                const auto got = bounded_bfs_distance(g, m.id(a), m.id(b), static_cast<HopCount>(n), mode);
                const bool ok = d[a][b] >= kInf ? !got : (got && *got == static_cast<HopCount>(d[a][b]));
                ++pairs;
                if (!ok) c.expect(false, "BFS mismatch on graph " + std::to_string(seed));
            }
            if (walk == EdgeListModel::Walk::UpUnion) {
                for (int a = 0; a < n; ++a) {
                    const NodeIndex src = g.index_of(m.id(a));
                    const auto dist = multi_source_distances(g, std::span(&src, 1), Direction::Upward);
                    for (int b = 0; b < n; ++b) {
                        const auto got = dist[g.index_of(m.id(b))];
                        const bool ok = d[a][b] >= kInf ? got == kUnreached : got == static_cast<HopCount>(d[a][b]);
                        if (!ok) c.expect(false, "multi-source mismatch on graph " + std::to_string(seed));
                    }
                }
            }
        }
        const auto labeling = weakly_connected_components(g);
        const auto reps = m.union_find_representatives();
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                const bool same_lib = labeling.component_of[g.index_of(m.id(a))] == labeling.component_of[g.index_of(m.id(b))];
                if (same_lib != (reps[a] == reps[b])) {
                    c.expect(false, "WCC mismatch on graph " + std::to_string(seed));
                    a = n;
                    break;
                }
            }
    }
    c.note("100 graphs, " + std::to_string(pairs) + " BFS pairs, all-source upward BFS, WCC = union-find");
    return c.outcome();
}

Outcome aggregation() {
    Checks c;
    std::vector<RootKeyedDrift> ten;
    for (int i = 1; i <= 10; ++i) ten.push_back({Q(1), i / 10.0, i / 10.0 >= kDefaultDriftThreshold});
    const auto small = aggregate_by_root(ten);
    c.expect(small.size() == 1, "ten-value example: not one root");
    if (small.size() == 1) {
        c.expect(std::abs(small[0].avg_drift - 0.55) <= kAggregationTol, "avg " + fmt(small[0].avg_drift, 17));
        c.expect(std::abs(small[0].p90 - 0.9) <= kAggregationTol, "p90 " + fmt(small[0].p90, 17));
        c.expect(std::abs(small[0].high_ratio - 0.5) <= kAggregationTol, "high_ratio " + fmt(small[0].high_ratio, 17));
    }

    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::uint64_t> root(1, 300);
    std::uniform_real_distribution<double> value(0.0, 2.0);
    std::vector<RootKeyedDrift> items(100000);
    std::map<EntityId, std::vector<RootKeyedDrift>> groups;
    for (auto& it : items) {
        it.root = root(rng) == 300 ? kUnrootedComponent : Q(root(rng));
        it.drift_adj = value(rng);
        it.flagged = it.drift_adj >= kDefaultDriftThreshold;
        groups[it.root].push_back(it);
    }
    const auto got = aggregate_by_root(items);
    c.expect(got.size() == groups.size(), "root count " + std::to_string(got.size()));
    double worst = 0;
    for (const auto& agg : got) {
        auto it = groups.find(agg.root);
        if (it == groups.end()) {
            c.expect(false, "unexpected root " + root_label(agg.root));
            continue;
        }
        std::vector<double> v;
        std::size_t high = 0;
        for (const auto& r : it->second) {
            v.push_back(r.drift_adj);
            high += r.flagged;
        }
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        const double mean = std::accumulate(v.begin(), v.end(), 0.0L) / static_cast<long double>(n);
        const double p90 = v[(9 * n + 9) / 10 - 1];
        const double ratio = static_cast<double>(high) / static_cast<double>(n);
        c.expect(agg.cnt == n, "count mismatch for " + root_label(agg.root));
        worst = std::max({worst, std::abs(agg.avg_drift - mean), std::abs(agg.p90 - p90), std::abs(agg.high_ratio - ratio)});
    }
    c.expect(worst <= kAggregationTol, "max |error| " + fmt(worst));
    for (std::size_t i = 1; i < got.size(); ++i)
        c.expect(got[i - 1].cnt > got[i].cnt || (got[i - 1].cnt == got[i].cnt && got[i - 1].root < got[i].root),
                 "ordering broken at " + std::to_string(i));
    c.note("ten-value example 0.55 / 0.9 / 0.5; 1e5 records over " + std::to_string(groups.size()) +
           " roots, max |error| " + fmt(worst, 3));
    return c.outcome();
}

Outcome pure_classes() {
    Checks c;
    const auto r = pure_class_filter(g1());
    c.expect(r.pure_classes == std::vector<EntityId>{Q(2), Q(3), Q(6)}, "G1 pure classes differ");
    c.expect(r.pure_with_instances == std::vector<EntityId>{Q(2)}, "G1 pure-with-instances differ");

    // 100k-entity DAG: edges only point to smaller ids, so no cycles and the
    // filter reduces to degree counts.
    constexpr std::uint64_t kNodes = 100000;
    std::mt19937_64 rng(5);
    std::vector<Edge> edges;
    std::geometric_distribution<int> fan(0.55);
    std::bernoulli_distribution instance(0.3);
    for (std::uint64_t child = 2; child <= kNodes; ++child) {
        std::uniform_int_distribution<std::uint64_t> parent(1, child - 1);
        const int k = 1 + fan(rng);
        for (int i = 0; i < k; ++i) edges.push_back(instance(rng) ? p31(child, parent(rng)) : p279(child, parent(rng)));
    }
    const auto start = Clock::now();
    const auto g = build_graph(edges);
    const auto got = pure_class_filter(g);
    const double elapsed = seconds_since(start);

    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::vector<int> out279(kNodes + 1), out31(kNodes + 1), in31(kNodes + 1);
    for (const auto& e : edges) {
        if (e.kind == EdgeKind::SubclassOf) {
            ++out279[e.child.numeric()];
        } else {
            ++out31[e.child.numeric()];
            ++in31[e.parent.numeric()];
        }
    }
    std::vector<EntityId> pure, with_instances;
    for (std::uint64_t q = 1; q <= kNodes; ++q) {
        if (out279[q] == 1 && out31[q] <= 2) {
            pure.push_back(Q(q));
            if (in31[q] > 0) with_instances.push_back(Q(q));
        }
    }
    c.expect(got.pure_classes == pure, "synthetic pure classes differ from the degree oracle");
    c.expect(got.pure_with_instances == with_instances, "synthetic pure-with-instances differ from the degree oracle");
    c.note("G1 {Q2,Q3,Q6} / {Q2}; synthetic " + std::to_string(g.node_count()) + " nodes, " +
           std::to_string(pure.size()) + " pure, " + std::to_string(with_instances.size()) + " with instances, " +
           fmt(elapsed, 3) + " s");
    return c.outcome();
}

// Runs in a fresh child process so peak RSS covers only this work. Prints
// "<seconds> <round_trip_ok> <edges> <nodes>" on stdout.
int ingest_child(const std::filesystem::path& dir) {
    constexpr std::uint64_t kTriples = 1000000;
    const auto path = dir / "synthetic.tsv";
    {
        std::ofstream out(path, std::ios::binary);
        std::mt19937_64 rng(123);
        std::uniform_int_distribution<std::uint64_t> id(1, 400000);
        std::bernoulli_distribution instance(0.4);
        std::string line;
        for (std::uint64_t i = 0; i < kTriples; ++i) {
            line = "Q" + std::to_string(id(rng)) + (instance(rng) ? "\tP31\tQ" : "\tP279\tQ") + std::to_string(id(rng)) + "\n";
            out << line;
        }
    }
    const auto start = Clock::now();
    GraphBuilder builder;
    builder.reserve(kTriples);
    std::ifstream in(path, std::ios::binary);
    const auto report = parse_triples_tsv(in, [&](const TripleRecord& r) { builder.add(r.edge()); });
    const auto g = std::move(builder).finalize();
    const double elapsed = seconds_since(start);

    std::stringstream canonical;
    write_triples_tsv(g, canonical);
    GraphBuilder again;
    parse_triples_tsv(canonical, [&](const TripleRecord& r) { again.add(r.edge()); });
    const bool same = std::move(again).finalize() == g && report.valid == kTriples;
    std::cout << elapsed << " " << same << " " << g.edge_count() << " " << g.node_count() << std::endl;
    return 0;
}

Outcome ingest_performance(const char* self) {
    Checks c;
    TempDir tmp("accept-ingest");
    int pipefd[2];
    if (pipe(pipefd) != 0) return {Status::Fail, "pipe failed"};
    const pid_t pid = fork();
    if (pid == 0) {
        dup2(pipefd[1], STDOUT_FILENO);
        close(pipefd[0]);
        close(pipefd[1]);
        execl(self, self, "--ingest-child", tmp.path().c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(pipefd[1]);
    std::string out;
    char buf[256];
    for (ssize_t k; (k = read(pipefd[0], buf, sizeof buf)) > 0;) out.append(buf, static_cast<std::size_t>(k));
    close(pipefd[0]);
    int status = 0;
    struct rusage usage {};
    wait4(pid, &status, 0, &usage);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {Status::Fail, "child failed: " + out};

    std::istringstream fields(out);
    double seconds = 0;
    int same = 0;
    std::size_t edges = 0, nodes = 0;
    fields >> seconds >> same >> edges >> nodes;
    const long peak_kib = usage.ru_maxrss;
    c.expect(seconds < kIngestTimeBudgetS, "parse + build took " + fmt(seconds) + " s");
    c.expect(peak_kib < kIngestMemoryBudgetKiB, "peak RSS " + std::to_string(peak_kib / 1024) + " MiB");
    c.expect(same == 1, "round trip is not graph-identical");
    c.note("1M triples in " + fmt(seconds, 3) + " s, peak " + std::to_string(peak_kib / 1024) + " MiB, " +
           std::to_string(edges) + " edges / " + std::to_string(nodes) + " nodes, round trip identical");
    return c.outcome();
}

// Synthetic inputs large enough to exercise the parallel paths.
void write_synthetic_inputs(const std::filesystem::path& dir) {
    std::mt19937_64 rng(31);
    std::ofstream triples(dir / "t.tsv"), texts(dir / "x.tsv");
    const char* words[] = {"station", "railway", "mining", "ore", "industry", "protein", "enzyme", "village",
                           "river",   "bridge",  "museum", "school", "church",  "tower",   "film",   "album"};
    std::uniform_int_distribution<int> word(0, 15);
    for (std::uint64_t q = 2; q <= 3000; ++q) {
        std::uniform_int_distribution<std::uint64_t> parent(1, q - 1);
        const int k = 1 + static_cast<int>(q % 4);
        for (int i = 0; i < k; ++i) triples << "Q" << q << (i == 3 ? "\tP31\tQ" : "\tP279\tQ") << parent(rng) << "\n";
        texts << "Q" << q << "\ten\t" << words[word(rng)] << " " << words[word(rng)] << "\t" << words[word(rng)]
              << " of " << words[word(rng)] << "\n";
    }
    texts << "Q1\ten\tentity\tanything\n";
}

Outcome determinism() {
    Checks c;
    TempDir tmp("accept-det");
    write_synthetic_inputs(tmp.path());
    const char* files[] = {artifact::kTriples, artifact::kTexts, artifact::kComponents, artifact::kFlags,
                           artifact::kPure,    artifact::kRisk,  artifact::kDrift,      artifact::kRoots,
                           artifact::kHeatmap};
    std::size_t compared = 0;
    for (const bool synthetic : {false, true}) {
        std::string out[2];
        for (int run = 0; run < 2; ++run) {
            auto cfg = g1_config(tmp / ((synthetic ? "s" : "g") + std::to_string(run)));
            if (synthetic) {
                cfg.triples = tmp / "t.tsv";
                cfg.texts = tmp / "x.tsv";
                cfg.remote.dimension = 128;
            }
            cfg.jobs = run == 0 ? 1 : 4;
            run_all(cfg);
        }
        for (const char* f : files) {
            const auto a = read_file(tmp / ((synthetic ? "s" : "g") + std::string("0")) / f);
            const auto b = read_file(tmp / ((synthetic ? "s" : "g") + std::string("1")) / f);
            c.expect(!a.empty() && a == b, std::string(synthetic ? "synthetic " : "G1 ") + f + " differs");
            ++compared;
        }
    }
    c.note(std::to_string(compared) + " artifacts byte-identical across runs (jobs 1 vs 4)");
    return c.outcome();
}

Outcome api_contract() {
    Checks c;
    TempDir tmp("accept-api");
    run_all(g1_config(tmp.path()));
    ServerOptions o;
    o.data_dir = tmp.path();
    o.live_fetch = false;
    ApiServer server(o);
    const int port = server.start();
    if (port < 0) return {Status::Fail, "bind failed"};
    httplib::Client client("127.0.0.1", port);
    std::size_t endpoints = 0;

    auto get = [&](const std::string& path, int want_status) -> json {
        auto res = client.Get(path);
        if (!res) {
            c.expect(false, path + ": no response");
            return {};
        }
        c.expect(res->status == want_status, path + ": status " + std::to_string(res->status));
        c.expect(res->get_header_value("Content-Type").rfind("application/json", 0) == 0, path + ": not JSON");
        auto doc = json::parse(res->body, nullptr, false);
        c.expect(doc.is_object() && doc.value("api", 0) == 1, path + ": missing api version");
        if (want_status >= 400)
            c.expect(doc.contains("error") && doc["error"]["code"].is_string() && doc["error"]["message"].is_string(),
                     path + ": bad error envelope");
        return doc;
    };
    auto has = [&](const json& doc, const std::string& path, std::initializer_list<std::pair<const char*, json::value_t>> fields) {
        for (auto [key, type] : fields) {
            const bool ok = doc.contains(key) && (doc[key].type() == type ||
                                                  (type == json::value_t::number_float && doc[key].is_number()) ||
                                                  (type == json::value_t::number_unsigned && doc[key].is_number_integer()));
            c.expect(ok, path + ": field '" + key + "' missing or mistyped");
        }
    };
    using T = json::value_t;

    auto status = get("/api/status", 200);
    has(status, "status", {{"loaded", T::boolean}, {"snapshot", T::object}, {"locales", T::array}});
    ++endpoints;

    for (const char* q : {"Q1", "Q2", "Q3", "Q4", "Q5", "Q6", "Q7", "Q8", "Q9"}) {
        const std::string path = std::string("/api/entity/") + q;
        auto d = get(path, 200);
        has(d, path, {{"qid", T::string}, {"label", T::string}, {"description", T::string}, {"parents", T::object},
                      {"narrative", T::array}, {"flags", T::array}});
        c.expect(d["risk"].is_object() || d["risk"].is_null(), path + ": risk");
        c.expect(d["drift"].is_object() || d["drift"].is_null(), path + ": drift");
        if (d["risk"].is_object())
            has(d["risk"], path + " risk", {{"p31_cnt", T::number_unsigned}, {"p279_cnt", T::number_unsigned},
                                            {"dims", T::object}, {"aggregate", T::number_float}});
    }
    c.expect(get("/api/entity/Q6", 200)["flags"][0]["tag"] == "DualRole", "Q6 lacks DualRole");
    get("/api/entity/Q0", 400);
    get("/api/entity/Q123456", 404);
    ++endpoints;

    auto red = get("/api/entity/Q9/redundancy?max_paths=5", 200);
    has(red, "redundancy", {{"qid", T::string}, {"redundant", T::array}});
    c.expect(red["redundant"].size() == 1 && red["redundant"][0]["witnesses"][0] == json({"Q9", "Q2", "Q1"}),
             "Q9 witness is not [Q9,Q2,Q1]");
    get("/api/entity/Q9/redundancy?max_paths=0", 400);
    ++endpoints;

    std::size_t matrices = 0;
    for (const char* q : {"Q4", "Q5", "Q6", "Q9"}) {
        const std::string path = std::string("/api/entity/") + q + "/similarity";
        auto d = get(path, 200);
        has(d, path, {{"labels", T::array}, {"names", T::array}, {"matrix", T::array}, {"provider", T::string}});
        const auto& m = d["matrix"];
        const std::size_t n = d["labels"].size();
        c.expect(n >= 2 && m.size() == n, path + ": matrix shape");
        for (std::size_t i = 0; i < m.size(); ++i) {
            c.expect(m[i].size() == n, path + ": row shape");
            c.expect(std::abs(m[i][i].get<double>() - 1.0) <= kMatrixTol, path + ": diagonal");
            for (std::size_t j = 0; j < m[i].size() && j < n; ++j)
                c.expect(std::abs(m[i][j].get<double>() - m[j][i].get<double>()) <= kMatrixTol, path + ": asymmetric");
        }
        ++matrices;
    }
    get("/api/entity/Q1/similarity", 422);
    ++endpoints;

    auto roots = get("/api/roots/top?n=20", 200);
    has(roots, "roots", {{"roots", T::array}});
    c.expect(roots["roots"].size() == 1 && roots["roots"][0]["root"] == "Q1", "roots are not {Q1}");
    ++endpoints;

    auto heat = get("/api/heatmap", 200);
    has(heat, "heatmap", {{"groups", T::array}, {"bins", T::array}, {"counts", T::array}});
    c.expect(heat["total"] == 3, "heatmap total is not 3");
    ++endpoints;

    for (const char* lang : {"en", "zh", "ja"}) has(get(std::string("/api/i18n/") + lang, 200), lang, {{"messages", T::object}});
    get("/api/i18n/xx", 404);
    ++endpoints;

    auto posted = client.Post("/api/scan", R"({"entities":["Q4","Q6"],"stages":["risk"]})", "application/json");
    c.expect(posted && posted->status == 202, "scan not accepted");
    if (posted && posted->status == 202) {
        const std::string id = json::parse(posted->body)["id"];
        auto rec = server.jobs().wait(id, std::chrono::seconds(30));
        c.expect(rec && rec->state == JobState::Done, "scan job did not finish");
        auto job = get("/api/jobs/" + id, 200);
        has(job, "job", {{"id", T::string}, {"state", T::string}, {"progress", T::number_float}, {"results", T::object}});
        auto csv = client.Get("/api/jobs/" + id + "/result/risk");
        c.expect(csv && std::count(csv->body.begin(), csv->body.end(), '\n') == 3, "scan CSV is not 2 rows");
    }
    get("/api/jobs/jmissing", 404);
    endpoints += 2;

    for (const char* path : {"/api/entity/Q4", "/api/entity/Q4/similarity", "/api/heatmap"}) {
        auto a = client.Get(path), b = client.Get(path);
        c.expect(a && b && a->body == b->body, std::string(path) + ": repeated GETs differ");
    }
    server.stop();
    c.note(std::to_string(endpoints) + " endpoints, " + std::to_string(matrices) +
           " similarity matrices symmetric with unit diagonal; no console build involved");
    return c.outcome();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc == 3 && std::string(argv[1]) == "--ingest-child") return ingest_child(argv[2]);

    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const char* self = "/proc/self/exe";
    const std::vector<Criterion> criteria = {
        {"drift math exactness", drift_math},
        {"analytic drift cases", analytic_drift},
        {"Table 1 reproduction (networked)", table1},
        {"CME oracle equivalence", cme_oracle},
        {"fixture G1 end-to-end", g1_end_to_end},
        {"graph primitives", graph_primitives},
        {"aggregation", aggregation},
        {"pure-class filter", pure_classes},
        {"ingest performance", [&] { return ingest_performance(self); }},
        {"determinism", determinism},
        {"API contract", api_contract},
    };

    int failed = 0;
    for (const auto& cr : criteria) {
        Outcome o;
        const auto start = Clock::now();
        try {
            o = cr.run();
        } catch (const std::exception& e) {
            o = {Status::Fail, std::string("exception: ") + e.what()};
        }
        const char* label = o.status == Status::Pass ? "PASS" : o.status == Status::Fail ? "FAIL" : "SKIP";
        failed += o.status == Status::Fail;
        std::cout << label << "  " << cr.name << " (" << fmt(seconds_since(start), 3) << " s): " << o.detail
                  << std::endl;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed"))
              << std::endl;
    return failed ? 1 : 0;
}
