// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors

#include <fstream>

#include "taxolint/error.hpp"
#include "taxolint/server.hpp"

namespace taxolint {

namespace {

template <typename Reader>
auto read_optional(const std::filesystem::path& path, Reader&& reader) -> std::optional<decltype(reader(
                                                                           std::declval<std::istream&>()))> {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    return reader(in);
}

void finish(AnalysisSnapshot& s) {
    s.clean = clean_relations(s.graph, s.policy).graph;
    try {
        s.scorer = std::make_unique<RiskScorer>(s.clean, s.config.risk);
    } catch (const RootMissing&) {
        s.scorer.reset();
    }
    auto ctx = std::make_shared<EmbeddingContext>();
    ctx->provider = make_provider(s.config);
    ctx->cache = std::make_unique<EmbeddingCache>(ctx->provider->dimension());
    ctx->embedder = std::make_unique<Embedder>(*ctx->provider, *ctx->cache);
    s.embeddings = std::move(ctx);
}

}  // namespace

std::shared_ptr<const AnalysisSnapshot> AnalysisSnapshot::load(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw MissingArtifact("data directory " + dir.string() + " does not exist");
    auto s = std::make_shared<AnalysisSnapshot>();
    s->dir = dir;
    const auto conf = dir / artifact::kConfig;
    if (std::filesystem::exists(conf)) s->config = PipelineConfig::from_file(conf);
    s->config.out_dir = dir;
    s->policy = policy_for(s->config);
    s->graph = load_graph(dir);
    if (std::filesystem::exists(dir / artifact::kTexts)) s->texts = load_texts(dir);

    if (auto rows = read_optional(dir / artifact::kRisk, [](std::istream& in) { return read_risk_csv(in); })) {
        for (auto& r : *rows) s->risk.emplace(r.entity, std::move(r));
    }
    if (auto rows = read_optional(dir / artifact::kDrift, [](std::istream& in) { return read_drift_csv(in); })) {
        for (auto& r : *rows) s->drift.emplace(r.entity, r);
    }
    if (auto rows = read_optional(dir / artifact::kFlags, [](std::istream& in) { return read_flags_csv(in); })) {
        s->flag_count = rows->size();
        for (auto& r : *rows) s->flags[r.entity].push_back(std::move(r));
    }
    s->roots = read_optional(dir / artifact::kRoots, [](std::istream& in) { return read_roots_csv(in); });
    s->heatmap = read_optional(dir / artifact::kHeatmap, [](std::istream& in) { return read_heatmap_csv(in); });
    finish(*s);
    return s;
}

std::shared_ptr<AnalysisSnapshot> AnalysisSnapshot::from_graph(TaxonomyGraph graph, PipelineConfig config) {
    auto s = std::make_shared<AnalysisSnapshot>();
    s->config = std::move(config);
    s->dir = s->config.out_dir;
    s->policy = policy_for(s->config);
    s->graph = std::move(graph);
    finish(*s);
    return s;
}

}  // namespace taxolint
