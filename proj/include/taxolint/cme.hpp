// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors
#pragma once
// Composite-meaning-entity detection: component segmentation, entry points,
// anti-pattern flags, and the pure-class / entity-tree filter.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "taxolint/entity.hpp"
#include "taxolint/graph.hpp"

namespace taxolint {

using ComponentId = std::uint32_t;

// Weakly connected components over both edge kinds. Component ids are dense
// and ordered by each component's smallest member id.
struct ComponentLabeling {
    std::vector<ComponentId> component_of;  // by node index
    std::vector<std::size_t> component_sizes;
    // members of component c: member_nodes[member_offsets[c] .. member_offsets[c+1])
    std::vector<std::size_t> member_offsets;
    std::vector<NodeIndex> member_nodes;

    std::size_t component_count() const noexcept { return component_sizes.size(); }
    std::span<const NodeIndex> members(ComponentId c) const noexcept {
        return {member_nodes.data() + member_offsets[c], member_nodes.data() + member_offsets[c + 1]};
    }
};

ComponentLabeling weakly_connected_components(const TaxonomyGraph& g);

// Zero out-degree members of `component`, ascending. Empty means every
// member has a parent, so the component contains a cycle.
std::vector<EntityId> entry_points(const TaxonomyGraph& g, const ComponentLabeling& labeling,
                                   ComponentId component);

enum class AntiPatternTag : std::uint8_t {
    DualRole,                // P279 parent and a meaningful P31 parent
    InstanceWithSubclasses,  // P279 children and a meaningful P31 parent
    CycleMember,             // on a directed P279 cycle (SCC >= 2 or self-loop)
    RedundantEdge,           // direct P279 edge shadowed by a longer P279 path
    SelfLoop,                // an edge to itself, either kind
};

std::string_view tag_name(AntiPatternTag tag) noexcept;
std::optional<AntiPatternTag> parse_tag(std::string_view name) noexcept;

struct AntiPatternFlag {
    EntityId entity;
    AntiPatternTag tag = AntiPatternTag::DualRole;
    // DualRole / InstanceWithSubclasses: the offending P31 targets.
    std::vector<EntityId> instance_targets;
    // CycleMember: the SCC, ascending.
    std::vector<EntityId> cycle;
    // RedundantEdge: the shadowed parent and witness paths entity -> ... -> parent.
    std::optional<EntityId> redundant_parent;
    std::vector<std::vector<EntityId>> witnesses;
    // SelfLoop: which property loops.
    std::optional<EdgeKind> loop_kind;

    // Compact CSV detail, e.g. "via:Q2" or "cycle:Q7-Q8".
    std::string detail() const;

    friend bool operator==(const AntiPatternFlag&, const AntiPatternFlag&) = default;
};

struct DetectorOptions {
    std::size_t max_paths = 5;  // witness paths per redundant edge, >= 1
    HopCount witness_depth = 10;
    unsigned jobs = 1;
};

// Every flag, ordered by (entity, tag, detail).
std::vector<AntiPatternFlag> detect_anti_patterns(const TaxonomyGraph& g, const MetaclassPolicy& policy,
                                                  const DetectorOptions& options = {});

// Redundant-edge findings for a single entity.
std::vector<AntiPatternFlag> redundant_edges_of(const TaxonomyGraph& g, EntityId entity, std::size_t max_paths,
                                                HopCount witness_depth = 10);

// Nodes on a directed P279 cycle, by node index.
std::vector<bool> subclass_cycle_nodes(const TaxonomyGraph& g);

struct PureClassReport {
    std::vector<EntityId> pure_classes;
    std::vector<EntityId> pure_with_instances;
    std::vector<EntityId> tree_roots;
    std::size_t instances_covered = 0;
    double coverage_ratio = 0.0;
};

// Pure class: exactly one outgoing P279, at most two outgoing P31, not on a
// P279 cycle. Tree roots are pure classes with instances whose P279
// descendant closure is singly parented inside the closure.
PureClassReport pure_class_filter(const TaxonomyGraph& g);

// Uniform sample without replacement from the descendants (reverse edges of
// either kind) of seed_root, excluding the root. Deterministic in rng_seed.
std::vector<EntityId> sample_component(const TaxonomyGraph& g, EntityId seed_root, std::size_t size,
                                       std::uint64_t rng_seed);

}  // namespace taxolint
