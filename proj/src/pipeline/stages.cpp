// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "taxolint/error.hpp"
#include "taxolint/pipeline.hpp"

namespace taxolint {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputUnreadable("cannot read " + path.string());
    return in;
}

nlohmann::ordered_json report_json(const ParseReport& r) {
    return {{"total", r.total}, {"valid", r.valid}, {"comment", r.comment}, {"malformed", r.malformed}};
}

nlohmann::ordered_json id_array(const std::vector<EntityId>& ids) {
    auto out = nlohmann::ordered_json::array();
    for (auto id : ids) out.push_back(id.str());
    return out;
}

TaxonomyGraph load_clean_graph(const PipelineConfig& config) {
    return clean_relations(load_graph(config.out_dir), policy_for(config)).graph;
}

// Every stage records the configuration it ran with; the server reads it back.
void save_config(const PipelineConfig& config) {
    write_file_atomic(config.artifact(artifact::kConfig), config.serialize());
}

std::vector<DriftRecord> load_drift(const PipelineConfig& config) {
    return read_artifact(config.artifact(artifact::kDrift), [](std::istream& in) { return read_drift_csv(in); });
}

}  // namespace

std::string IngestSummary::to_json() const {
    nlohmann::ordered_json doc;
    doc["nodes"] = nodes;
    doc["edges"] = edges();
    doc["p31_edges"] = p31_edges;
    doc["p279_edges"] = p279_edges;
    doc["texts"] = text_rows;
    doc["triples_lines"] = report_json(triples);
    doc["dump_lines"] = report_json(dump);
    doc["texts_lines"] = report_json(texts);
    return doc.dump(2) + "\n";
}

IngestSummary run_ingest(const PipelineConfig& config) {
    if (config.triples.empty() && config.dump.empty()) throw InvalidConfig("ingest needs a triples file or a dump");
    IngestSummary summary;
    GraphBuilder builder;
    std::vector<EntityText> texts;

    if (!config.triples.empty()) {
        auto in = open_input(config.triples);
        summary.triples = parse_triples_tsv(in, [&](const TripleRecord& r) { builder.add(r.edge()); });
    }
    if (!config.texts.empty()) {
        auto in = open_input(config.texts);
        summary.texts = parse_texts_tsv(in, [&](EntityText t) { texts.push_back(std::move(t)); });
    }
    if (!config.dump.empty()) {
        auto in = open_input(config.dump);
        auto parsed = parse_dump_stream(in, config.language, config.jobs);
        summary.dump = parsed.report;
        for (const auto& e : parsed.edges) builder.add(e);
        for (auto& t : parsed.texts) {
            if (!t.label.empty() || !t.description.empty()) texts.push_back(std::move(t));
        }
    }
    auto graph = std::move(builder).finalize();
    std::filesystem::create_directories(config.out_dir);
    save_config(config);

    // The texts file wins over dump texts for the same (entity, language).
    std::stable_sort(texts.begin(), texts.end(), [](const EntityText& a, const EntityText& b) {
        return std::tie(a.entity, a.language) < std::tie(b.entity, b.language);
    });
    texts.erase(std::unique(texts.begin(), texts.end(),
                            [](const EntityText& a, const EntityText& b) {
                                return a.entity == b.entity && a.language == b.language;
                            }),
                texts.end());

    summary.nodes = graph.node_count();
    summary.p31_edges = graph.edge_count(EdgeKind::InstanceOf);
    summary.p279_edges = graph.edge_count(EdgeKind::SubclassOf);
    summary.text_rows = texts.size();

    {
        AtomicFile f(config.artifact(artifact::kTriples));
        write_triples_tsv(graph, f.stream());
        f.commit();
    }
    {
        AtomicFile f(config.artifact(artifact::kTexts));
        write_texts_tsv(texts, f.stream());
        f.commit();
    }
    write_file_atomic(config.artifact(artifact::kIngestReport), summary.to_json());
    return summary;
}

TaxonomyGraph load_graph(const std::filesystem::path& dir) {
    const auto path = dir / artifact::kTriples;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifact("missing artifact " + path.string() + " (run ingest first)");
    GraphBuilder b;
    parse_triples_tsv(in, [&](const TripleRecord& r) { b.add(r.edge()); });
    return std::move(b).finalize();
}

TextIndex load_texts(const std::filesystem::path& dir) {
    const auto path = dir / artifact::kTexts;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifact("missing artifact " + path.string() + " (run ingest first)");
    TextIndex index;
    parse_texts_tsv(in, [&](EntityText t) { index.add(std::move(t)); });
    return index;
}

std::vector<AntiPatternFlag> run_cme(const PipelineConfig& config) {
    const auto graph = load_graph(config.out_dir);
    save_config(config);
    const auto labeling = weakly_connected_components(graph);
    auto flags = detect_anti_patterns(graph, policy_for(config),
                                      {.max_paths = config.max_paths,
                                       .witness_depth = config.witness_depth,
                                       .jobs = config.jobs});
    {
        AtomicFile f(config.artifact(artifact::kComponents));
        write_components_csv(f.stream(), graph, labeling);
        f.commit();
    }
    AtomicFile f(config.artifact(artifact::kFlags));
    write_flags_csv(f.stream(), flags);
    f.commit();
    return flags;
}

PureClassReport run_pure(const PipelineConfig& config) {
    auto report = pure_class_filter(load_graph(config.out_dir));
    save_config(config);
    nlohmann::ordered_json doc;
    doc["pure_classes"] = id_array(report.pure_classes);
    doc["pure_with_instances"] = id_array(report.pure_with_instances);
    doc["tree_roots"] = id_array(report.tree_roots);
    doc["instances_covered"] = report.instances_covered;
    doc["coverage_ratio"] = report.coverage_ratio;
    write_file_atomic(config.artifact(artifact::kPure), doc.dump(2) + "\n");
    return report;
}

std::vector<RiskReport> score_entities(const TaxonomyGraph& clean, const RiskConfig& config,
                                       std::span<const EntityId> entities, unsigned jobs) {
    const RiskScorer scorer(clean, config);
    std::vector<RiskReport> out(entities.size());
    parallel_chunks(entities.size(), jobs, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) out[i] = scorer.score(entities[i]);
    });
    return out;
}

std::vector<RiskReport> run_score(const PipelineConfig& config) {
    const auto clean = load_clean_graph(config);
    save_config(config);
    std::vector<EntityId> ids(clean.node_count());
    for (NodeIndex u = 0; u < clean.node_count(); ++u) ids[u] = clean.id_of(u);
    auto reports = score_entities(clean, config.risk, ids, config.jobs);
    AtomicFile f(config.artifact(artifact::kRisk));
    write_risk_csv(f.stream(), reports);
    f.commit();
    return reports;
}

std::unique_ptr<EmbeddingProvider> make_provider(const PipelineConfig& config) {
    if (config.provider == "remote") return std::make_unique<RemoteProvider>(config.remote);
    return std::make_unique<OfflineProvider>(config.remote.dimension, config.offline_seed);
}

DriftScanResult run_drift(const PipelineConfig& config, EmbeddingProvider* provider) {
    const auto clean = load_clean_graph(config);
    const auto texts = load_texts(config.out_dir);
    save_config(config);
    std::unique_ptr<EmbeddingProvider> owned;
    if (!provider) {
        owned = make_provider(config);
        provider = owned.get();
    }
    if (config.cache_path().has_parent_path()) std::filesystem::create_directories(config.cache_path().parent_path());
    EmbeddingCache cache(config.cache_path(), provider->dimension());
    Embedder embedder(*provider, cache);
    auto result = scan_drift(clean, texts, embedder,
                             {.threshold = config.drift_threshold, .language = config.language, .jobs = config.jobs});
    AtomicFile f(config.artifact(artifact::kDrift));
    write_drift_csv(f.stream(), result.records);
    f.commit();
    return result;
}

std::vector<RootAggregate> run_aggregate(const PipelineConfig& config) {
    const auto records = load_drift(config);
    const auto clean = load_clean_graph(config);
    save_config(config);
    const auto roots = assign_pseudo_roots(clean);
    auto aggregates = aggregate_by_root(records, clean, roots);
    AtomicFile f(config.artifact(artifact::kRoots));
    write_roots_csv(f.stream(), aggregates);
    f.commit();
    return aggregates;
}

Heatmap run_heatmap(const PipelineConfig& config) {
    const auto h = heatmap(load_drift(config));
    save_config(config);
    AtomicFile f(config.artifact(artifact::kHeatmap));
    write_heatmap_csv(f.stream(), h);
    f.commit();
    return h;
}

void run_all(const PipelineConfig& config, EmbeddingProvider* provider) {
    run_ingest(config);
    run_cme(config);
    run_pure(config);
    run_score(config);
    run_drift(config, provider);
    run_aggregate(config);
    run_heatmap(config);
}

}  // namespace taxolint
