// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors

#include "taxolint/risk.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "taxolint/error.hpp"

namespace taxolint {

std::string_view dimension_key(RiskDimension d) noexcept {
    switch (d) {
        case RiskDimension::Connection: return "connection";
        case RiskDimension::Coherence: return "coherence";
        case RiskDimension::DepthVariance: return "depth_variance";
        case RiskDimension::Alignment: return "alignment";
    }
    return "unknown";
}

std::string_view dimension_title(RiskDimension d) noexcept {
    switch (d) {
        case RiskDimension::Connection: return "Connection Count";
        case RiskDimension::Coherence: return "Structural Coherence";
        case RiskDimension::DepthVariance: return "Depth Variance";
        case RiskDimension::Alignment: return "Instance-Class Alignment";
    }
    return "Unknown";
}

RiskWeights RiskWeights::normalized() const {
    double sum = 0.0;
    for (double w : values) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidConfig("risk weights must be finite and non-negative");
        sum += w;
    }
    if (sum <= 0.0) throw InvalidConfig("risk weights sum to zero");
    RiskWeights out;
    for (std::size_t i = 0; i < values.size(); ++i) out.values[i] = values[i] / sum;
    return out;
}

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double excess(std::size_t count, double reference, double divisor) {
    return clamp01((static_cast<double>(count) - reference) / divisor);
}

// Undirected distance capped at `cap`; unreachable counts as the cap.
HopCount capped_distance(const TaxonomyGraph& g, NodeIndex a, NodeIndex b, HopCount cap) {
    return bounded_bfs_distance(g, a, b, cap, PathMode::UndirectedUnion).value_or(cap);
}

std::vector<HopCount> pairwise(const TaxonomyGraph& g, std::span<const NodeIndex> nodes, HopCount cap) {
    std::vector<HopCount> out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) out.push_back(capped_distance(g, nodes[i], nodes[j], cap));
    }
    return out;
}

CoherenceResult coherence_at(const TaxonomyGraph& g, NodeIndex u, const RiskConfig& config) {
    CoherenceResult out;
    if (config.parent_mode == ParentMode::Union) {
        out.distances = pairwise(g, g.union_parents(u), config.distance_cap);
    } else {
        for (EdgeKind kind : kAllEdgeKinds) {
            auto d = pairwise(g, g.parents(u, kind), config.distance_cap);
            out.distances.insert(out.distances.end(), d.begin(), d.end());
        }
    }
    if (out.distances.empty() || config.distance_cap == 0) return out;
    double sum = 0.0;
    for (HopCount d : out.distances) sum += d;
    out.score = clamp01(sum / static_cast<double>(out.distances.size()) / config.distance_cap);
    return out;
}

DepthVarianceResult depth_at(const TaxonomyGraph& g, NodeIndex u, std::span<const HopCount> root_depth,
                             const RiskConfig& config) {
    DepthVarianceResult out;
    for (NodeIndex p : g.union_parents(u)) {
        if (root_depth[p] == kUnreached) {
            out.unreachable.push_back(g.id_of(p));
        } else {
            out.depths.push_back(root_depth[p]);
        }
    }
    if (out.depths.empty()) return out;
    double mean = 0.0;
    for (HopCount d : out.depths) mean += d;
    mean /= static_cast<double>(out.depths.size());
    double var = 0.0;
    for (HopCount d : out.depths) var += (d - mean) * (d - mean);
    out.variance = var / static_cast<double>(out.depths.size());
    out.score = clamp01(out.variance / config.variance_divisor);
    return out;
}

AlignmentResult alignment_at(const TaxonomyGraph& g, NodeIndex u, const RiskConfig& config) {
    AlignmentResult out;
    auto p31 = g.parents(u, EdgeKind::InstanceOf);
    auto p279 = g.parents(u, EdgeKind::SubclassOf);
    if (p31.empty() || p279.empty()) return out;
    out.applicable = true;
    std::optional<HopCount> best;
    for (NodeIndex a : p31) {
        for (NodeIndex b : p279) {
            if (best && *best == 0) break;
            // Once a path is known only a strictly shorter one matters.
            const HopCount cap = best ? *best - 1 : config.distance_cap;
            if (auto d = bounded_bfs_distance(g, a, b, cap, PathMode::UndirectedUnion)) best = d;
        }
    }
    out.cross_distance = best;
    if (config.distance_cap == 0) return out;
    out.score = clamp01(static_cast<double>(best.value_or(config.distance_cap)) / config.distance_cap);
    return out;
}

std::vector<HopCount> root_depths(const TaxonomyGraph& g, const RiskConfig& config) {
    auto root = g.find(config.root);
    if (!root) throw RootMissing("root " + config.root.str() + " is not in the graph");
    const NodeIndex sources[] = {*root};
    return multi_source_distances(g, sources, Direction::Downward, config.depth_cap);
}

}  // namespace

double connection_score(std::size_t p31_count, std::size_t p279_count, const RiskConfig& config) {
    return std::max(excess(p31_count, config.reference_p31, config.excess_divisor),
                    excess(p279_count, config.reference_p279, config.excess_divisor));
}

CoherenceResult coherence_score(const TaxonomyGraph& g, EntityId e, const RiskConfig& config) {
    return coherence_at(g, g.index_of(e), config);
}

DepthVarianceResult depth_variance_score(const TaxonomyGraph& g, EntityId e, const RiskConfig& config) {
    const NodeIndex u = g.index_of(e);
    return depth_at(g, u, root_depths(g, config), config);
}

AlignmentResult alignment_score(const TaxonomyGraph& g, EntityId e, const RiskConfig& config) {
    return alignment_at(g, g.index_of(e), config);
}

RiskScorer::RiskScorer(const TaxonomyGraph& g, RiskConfig config) : g_(g), config_(std::move(config)) {
    config_.weights = config_.weights.normalized();
    root_depth_ = root_depths(g_, config_);
}

RiskReport RiskScorer::score(EntityId e) const { return score(g_.index_of(e)); }

RiskReport RiskScorer::score(NodeIndex u) const {
    RiskReport r;
    r.entity = g_.id_of(u);
    r.p31_count = g_.parents(u, EdgeKind::InstanceOf).size();
    r.p279_count = g_.parents(u, EdgeKind::SubclassOf).size();

    auto coherence = coherence_at(g_, u, config_);
    auto depth = depth_at(g_, u, root_depth_, config_);
    auto alignment = alignment_at(g_, u, config_);

    r.dims[0] = connection_score(r.p31_count, r.p279_count, config_);
    r.dims[1] = coherence.score;
    r.dims[2] = depth.score;
    r.dims[3] = alignment.score;
    r.raw_parent_distances = std::move(coherence.distances);
    r.parent_depths = std::move(depth.depths);
    r.parents_without_depth = std::move(depth.unreachable);
    r.depth_variance = depth.variance;
    r.alignment_applicable = alignment.applicable;
    r.cross_distance = alignment.cross_distance;

    double sum = 0.0;
    for (std::size_t i = 0; i < r.dims.size(); ++i) sum += config_.weights.values[i] * r.dims[i];
    r.aggregate = clamp01(sum);
    return r;
}

RiskReport aggregate_risk(const TaxonomyGraph& g, EntityId e, const RiskConfig& config) {
    const NodeIndex u = g.index_of(e);
    return RiskScorer(g, config).score(u);
}

std::vector<NarrativeItem> narrate_risk(const RiskReport& report, const LocaleCatalogs& catalogs,
                                        std::string_view locale) {
    std::vector<NarrativeItem> items;
    for (RiskDimension d : kAllDimensions) {
        const double s = report.dim(d);
        NarrativeItem item;
        if (s < 0.2) {
            item.severity = Severity::Strength;
        } else if (s > 0.6) {
            item.severity = Severity::Issue;
        } else {
            continue;
        }
        item.dimension = d;
        item.message_key = fmt::format("risk.{}.{}", dimension_key(d),
                                       item.severity == Severity::Strength ? "strength" : "issue");
        item.params["dimension"] = catalogs.lookup(locale, fmt::format("dimension.{}", dimension_key(d)));
        item.params["score"] = fmt::format("{:.3f}", s);
        item.message = catalogs.format(locale, item.message_key, item.params);
        items.push_back(std::move(item));
    }
    std::stable_sort(items.begin(), items.end(), [&](const NarrativeItem& a, const NarrativeItem& b) {
        return report.dim(a.dimension) > report.dim(b.dimension);
    });
    return items;
}

}  // namespace taxolint
