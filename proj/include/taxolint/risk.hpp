// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors
#pragma once
// Per-entity semantic risk over four structural dimensions:
//   connection  - excess P31/P279 link counts over the Wikidata averages
//   coherence   - mean pairwise distance between direct parents
//   depth       - variance of the parents' depths below the root
//   alignment   - distance between P31 targets and P279 targets
// All scores are in [0, 1]; the aggregate is their weighted mean.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "taxolint/entity.hpp"
#include "taxolint/graph.hpp"
#include "taxolint/locale.hpp"

namespace taxolint {

enum class RiskDimension : std::uint8_t { Connection = 0, Coherence = 1, DepthVariance = 2, Alignment = 3 };

inline constexpr RiskDimension kAllDimensions[] = {RiskDimension::Connection, RiskDimension::Coherence,
                                                   RiskDimension::DepthVariance, RiskDimension::Alignment};

// "connection", "coherence", "depth_variance", "alignment".
std::string_view dimension_key(RiskDimension d) noexcept;
// Console names: "Connection Count", "Structural Coherence", ...
std::string_view dimension_title(RiskDimension d) noexcept;

struct RiskWeights {
    std::array<double, 4> values{0.25, 0.25, 0.25, 0.25};

    // Rescales to sum 1. Throws InvalidConfig on negative or all-zero weights.
    RiskWeights normalized() const;
    double operator[](RiskDimension d) const { return values[static_cast<int>(d)]; }
};

// Parent set for coherence and depth: union of both kinds, or pairs taken
// within one kind only.
enum class ParentMode { Union, PerKind };

struct RiskConfig {
    double reference_p31 = 1.3;
    double reference_p279 = 1.2;
    double excess_divisor = 5.0;
    HopCount distance_cap = 10;
    HopCount depth_cap = 20;
    double variance_divisor = 9.0;
    EntityId root{35120};
    ParentMode parent_mode = ParentMode::Union;
    RiskWeights weights;
};

struct RiskReport {
    EntityId entity;
    std::size_t p31_count = 0;
    std::size_t p279_count = 0;
    std::array<double, 4> dims{0, 0, 0, 0};
    std::vector<HopCount> raw_parent_distances;  // unreachable pairs recorded as the cap
    std::vector<HopCount> parent_depths;         // reachable parents only
    std::vector<EntityId> parents_without_depth;
    double depth_variance = 0.0;
    bool alignment_applicable = false;
    std::optional<HopCount> cross_distance;  // nullopt when inapplicable or unreachable
    double aggregate = 0.0;

    double dim(RiskDimension d) const { return dims[static_cast<int>(d)]; }
};

double connection_score(std::size_t p31_count, std::size_t p279_count, const RiskConfig& config = {});

struct CoherenceResult {
    double score = 0.0;
    std::vector<HopCount> distances;
};
CoherenceResult coherence_score(const TaxonomyGraph& g, EntityId e, const RiskConfig& config = {});

struct DepthVarianceResult {
    double score = 0.0;
    std::vector<HopCount> depths;
    std::vector<EntityId> unreachable;
    double variance = 0.0;
};
// Throws RootMissing when config.root is not in g.
DepthVarianceResult depth_variance_score(const TaxonomyGraph& g, EntityId e, const RiskConfig& config = {});

struct AlignmentResult {
    double score = 0.0;
    bool applicable = false;
    std::optional<HopCount> cross_distance;
};
AlignmentResult alignment_score(const TaxonomyGraph& g, EntityId e, const RiskConfig& config = {});

// Scores many entities over one graph, computing root depths once.
// The graph should already be cleaned of technical parents.
class RiskScorer {
public:
    // Throws RootMissing.
    RiskScorer(const TaxonomyGraph& g, RiskConfig config);

    RiskReport score(EntityId e) const;
    RiskReport score(NodeIndex node) const;
    const RiskConfig& config() const noexcept { return config_; }

private:
    const TaxonomyGraph& g_;
    RiskConfig config_;
    std::vector<HopCount> root_depth_;
};

RiskReport aggregate_risk(const TaxonomyGraph& g, EntityId e, const RiskConfig& config = {});

enum class Severity { Strength, Issue };

struct NarrativeItem {
    Severity severity = Severity::Strength;
    RiskDimension dimension = RiskDimension::Connection;
    std::string message_key;                    // e.g. "risk.coherence.issue"
    std::map<std::string, std::string> params;  // "dimension", "score"
    std::string message;                        // resolved through the catalog
};

// score < 0.2 -> strength, score > 0.6 -> issue, ordered by descending score.
std::vector<NarrativeItem> narrate_risk(const RiskReport& report, const LocaleCatalogs& catalogs,
                                        std::string_view locale);

}  // namespace taxolint
