// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors
#pragma once
// TaxonomyGraph: immutable P31/P279 adjacency over dense node indices.
//
// Layout:
// - ids_: every entity id, ascending; node index = position in ids_
// - one CSR (offsets + targets) per (direction, kind): out_p31, out_p279,
//   in_p31, in_p279. Rows are sorted and duplicate-free.
//
// Edges are stored child -> parent. Ordinals are assigned by ascending
// EntityId, so the finalized graph does not depend on insertion order.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "taxolint/entity.hpp"

namespace taxolint {

using NodeIndex = std::uint32_t;
using HopCount = std::uint32_t;

class TaxonomyGraph {
public:
    TaxonomyGraph() = default;

    std::size_t node_count() const noexcept { return ids_.size(); }
    std::size_t edge_count(EdgeKind kind) const noexcept;
    std::size_t edge_count() const noexcept;
    // Self-loops are stored like any other edge and also counted here.
    std::size_t self_loop_count(EdgeKind kind) const noexcept;

    bool contains(EntityId id) const noexcept { return find(id).has_value(); }
    std::optional<NodeIndex> find(EntityId id) const noexcept;
    // Throws UnknownEntity.
    NodeIndex index_of(EntityId id) const;
    EntityId id_of(NodeIndex node) const noexcept { return ids_[node]; }
    std::span<const EntityId> ids() const noexcept { return ids_; }

    std::span<const NodeIndex> parents(NodeIndex node, EdgeKind kind) const noexcept {
        return out_[static_cast<int>(kind)].row(node);
    }
    std::span<const NodeIndex> children(NodeIndex node, EdgeKind kind) const noexcept {
        return in_[static_cast<int>(kind)].row(node);
    }
    std::size_t out_degree(NodeIndex node) const noexcept {
        return parents(node, EdgeKind::InstanceOf).size() + parents(node, EdgeKind::SubclassOf).size();
    }
    std::size_t in_degree(NodeIndex node) const noexcept {
        return children(node, EdgeKind::InstanceOf).size() + children(node, EdgeKind::SubclassOf).size();
    }

    // Distinct parents over both kinds, ascending.
    std::vector<NodeIndex> union_parents(NodeIndex node) const;

    // All edges in (child, kind, parent) order.
    std::vector<Edge> edges() const;

    template <typename Fn>
    void for_each_edge(Fn&& fn) const {
        for (NodeIndex u = 0; u < ids_.size(); ++u) {
            for (EdgeKind kind : kAllEdgeKinds) {
                for (NodeIndex v : parents(u, kind)) fn(u, kind, v);
            }
        }
    }

    friend bool operator==(const TaxonomyGraph&, const TaxonomyGraph&) = default;

private:
    friend class GraphBuilder;

    struct Csr {
        std::vector<std::uint64_t> offsets{0};
        std::vector<NodeIndex> targets;

        std::span<const NodeIndex> row(NodeIndex node) const noexcept {
            return {targets.data() + offsets[node], targets.data() + offsets[node + 1]};
        }
        friend bool operator==(const Csr&, const Csr&) = default;
    };

    std::vector<EntityId> ids_;
    std::array<Csr, 2> out_;
    std::array<Csr, 2> in_;
    std::array<std::size_t, 2> self_loops_{0, 0};
};

// Single-writer accumulator; finalize() produces the immutable graph.
// Duplicate edges collapse, self-loops are kept.
class GraphBuilder {
public:
    void add(const Edge& edge);
    void add(EntityId child, EdgeKind kind, EntityId parent) { add(Edge{child, kind, parent}); }
    // Registers a node that may have no edges.
    void add_node(EntityId id);
    void reserve(std::size_t edges) { edges_.reserve(edges); }

    std::size_t pending_edges() const noexcept { return edges_.size(); }

    TaxonomyGraph finalize() &&;

private:
    std::vector<Edge> edges_;
    std::vector<EntityId> extra_nodes_;
};

template <typename Range>
TaxonomyGraph build_graph(const Range& edges) {
    GraphBuilder builder;
    for (const Edge& e : edges) builder.add(e);
    return std::move(builder).finalize();
}

// How bounded_bfs_distance walks the graph.
enum class PathMode {
    UndirectedUnion,  // both kinds, either direction
    UpwardSubclass,   // child -> parent along P279 only
    UpwardUnion,      // child -> parent along P31 or P279
};

// Exact shortest-path hop count from a to b when it is <= cap, nullopt
// (unreachable) otherwise. Throws UnknownEntity.
std::optional<HopCount> bounded_bfs_distance(const TaxonomyGraph& g, EntityId a, EntityId b,
                                             HopCount cap, PathMode mode);
std::optional<HopCount> bounded_bfs_distance(const TaxonomyGraph& g, NodeIndex a, NodeIndex b,
                                             HopCount cap, PathMode mode);

struct Subgraph {
    std::vector<EntityId> nodes;  // ascending
    std::vector<Edge> edges;      // ascending (child, kind, parent)
};

// Nodes within `radius` undirected hops of e, with every edge touching a node
// closer than `radius` (the edges a radius-bounded expansion walks).
Subgraph neighborhood(const TaxonomyGraph& g, EntityId e, HopCount radius);

// Plain BFS distances from a set of sources over both kinds; kUnreached where
// not reached within cap. Upward follows child -> parent edges.
inline constexpr HopCount kUnreached = static_cast<HopCount>(-1);
enum class Direction { Upward, Downward };
std::vector<HopCount> multi_source_distances(const TaxonomyGraph& g, std::span<const NodeIndex> sources,
                                             Direction direction, HopCount cap = kUnreached);

}  // namespace taxolint
