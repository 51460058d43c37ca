// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors

#include "taxolint/graph.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "taxolint/error.hpp"

namespace taxolint {

std::size_t TaxonomyGraph::edge_count(EdgeKind kind) const noexcept {
    return out_[static_cast<int>(kind)].targets.size();
}

std::size_t TaxonomyGraph::edge_count() const noexcept {
    return edge_count(EdgeKind::InstanceOf) + edge_count(EdgeKind::SubclassOf);
}

std::size_t TaxonomyGraph::self_loop_count(EdgeKind kind) const noexcept {
    return self_loops_[static_cast<int>(kind)];
}

std::optional<NodeIndex> TaxonomyGraph::find(EntityId id) const noexcept {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return std::nullopt;
    return static_cast<NodeIndex>(it - ids_.begin());
}

NodeIndex TaxonomyGraph::index_of(EntityId id) const {
    auto node = find(id);
    if (!node) throw UnknownEntity(id.str() + " is not in the graph");
    return *node;
}

std::vector<NodeIndex> TaxonomyGraph::union_parents(NodeIndex node) const {
    auto p31 = parents(node, EdgeKind::InstanceOf);
    auto p279 = parents(node, EdgeKind::SubclassOf);
    std::vector<NodeIndex> out;
    out.reserve(p31.size() + p279.size());
    std::set_union(p31.begin(), p31.end(), p279.begin(), p279.end(), std::back_inserter(out));
    return out;
}

std::vector<Edge> TaxonomyGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for_each_edge([&](NodeIndex u, EdgeKind kind, NodeIndex v) {
        out.push_back(Edge{ids_[u], kind, ids_[v]});
    });
    return out;
}

void GraphBuilder::add(const Edge& edge) { edges_.push_back(edge); }

void GraphBuilder::add_node(EntityId id) { extra_nodes_.push_back(id); }

TaxonomyGraph GraphBuilder::finalize() && {
    TaxonomyGraph g;

    std::vector<EntityId> ids;
    ids.reserve(edges_.size() * 2 + extra_nodes_.size());
    for (const Edge& e : edges_) {
        ids.push_back(e.child);
        ids.push_back(e.parent);
    }
    ids.insert(ids.end(), extra_nodes_.begin(), extra_nodes_.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    g.ids_ = std::move(ids);
    extra_nodes_.clear();
    extra_nodes_.shrink_to_fit();

    const std::size_t n = g.ids_.size();
    for (EdgeKind kind : kAllEdgeKinds) {
        const int k = static_cast<int>(kind);
        std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
        for (const Edge& e : edges_) {
            if (e.kind != kind) continue;
            pairs.emplace_back(*g.find(e.child), *g.find(e.parent));
        }
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

        auto& out = g.out_[k];
        auto& in = g.in_[k];
        out.offsets.assign(n + 1, 0);
        in.offsets.assign(n + 1, 0);
        for (auto [child, parent] : pairs) {
            ++out.offsets[child + 1];
            ++in.offsets[parent + 1];
            if (child == parent) ++g.self_loops_[k];
        }
        for (std::size_t i = 0; i < n; ++i) {
            out.offsets[i + 1] += out.offsets[i];
            in.offsets[i + 1] += in.offsets[i];
        }
        // pairs is sorted by (child, parent): out rows fill in order.
        out.targets.resize(pairs.size());
        for (std::size_t i = 0; i < pairs.size(); ++i) out.targets[i] = pairs[i].second;
        // Scanning children ascending keeps each in-row sorted too.
        in.targets.resize(pairs.size());
        std::vector<std::uint64_t> cursor(in.offsets.begin(), in.offsets.end() - 1);
        for (auto [child, parent] : pairs) in.targets[cursor[parent]++] = child;
    }
    edges_.clear();
    edges_.shrink_to_fit();
    return g;
}

namespace {

template <typename Fn>
void for_each_neighbor(const TaxonomyGraph& g, NodeIndex u, PathMode mode, bool forward, Fn&& fn) {
    switch (mode) {
        case PathMode::UndirectedUnion:
            for (EdgeKind kind : kAllEdgeKinds) {
                for (NodeIndex v : g.parents(u, kind)) fn(v);
                for (NodeIndex v : g.children(u, kind)) fn(v);
            }
            break;
        case PathMode::UpwardSubclass:
            for (NodeIndex v : forward ? g.parents(u, EdgeKind::SubclassOf) : g.children(u, EdgeKind::SubclassOf))
                fn(v);
            break;
        case PathMode::UpwardUnion:
            for (EdgeKind kind : kAllEdgeKinds) {
                for (NodeIndex v : forward ? g.parents(u, kind) : g.children(u, kind)) fn(v);
            }
            break;
    }
}

}  // namespace

std::optional<HopCount> bounded_bfs_distance(const TaxonomyGraph& g, NodeIndex a, NodeIndex b,
                                             HopCount cap, PathMode mode) {
    if (a == b) return 0;
    if (cap == 0) return std::nullopt;

    // Bidirectional, level-synchronous: the first level on which the two
    // searches touch yields the shortest path.
    std::unordered_map<NodeIndex, HopCount> seen_fwd{{a, 0}}, seen_bwd{{b, 0}};
    std::vector<NodeIndex> frontier_fwd{a}, frontier_bwd{b};
    HopCount depth_fwd = 0, depth_bwd = 0;

    while (!frontier_fwd.empty() && !frontier_bwd.empty() && depth_fwd + depth_bwd < cap) {
        const bool grow_fwd = frontier_fwd.size() <= frontier_bwd.size();
        auto& frontier = grow_fwd ? frontier_fwd : frontier_bwd;
        auto& seen = grow_fwd ? seen_fwd : seen_bwd;
        auto& other = grow_fwd ? seen_bwd : seen_fwd;
        HopCount& depth = grow_fwd ? depth_fwd : depth_bwd;

        std::vector<NodeIndex> next;
        std::optional<HopCount> found;
        for (NodeIndex u : frontier) {
            for_each_neighbor(g, u, mode, grow_fwd, [&](NodeIndex v) {
                if (found) return;
                if (auto it = other.find(v); it != other.end()) {
                    found = depth + 1 + it->second;
                    return;
                }
                if (seen.emplace(v, depth + 1).second) next.push_back(v);
            });
            if (found) return found;
        }
        ++depth;
        frontier = std::move(next);
    }
    return std::nullopt;
}

std::optional<HopCount> bounded_bfs_distance(const TaxonomyGraph& g, EntityId a, EntityId b,
                                             HopCount cap, PathMode mode) {
    NodeIndex ia = g.index_of(a);
    NodeIndex ib = g.index_of(b);
    return bounded_bfs_distance(g, ia, ib, cap, mode);
}

Subgraph neighborhood(const TaxonomyGraph& g, EntityId e, HopCount radius) {
    const NodeIndex start = g.index_of(e);
    std::unordered_map<NodeIndex, HopCount> dist{{start, 0}};
    std::deque<NodeIndex> queue{start};
    while (!queue.empty()) {
        NodeIndex u = queue.front();
        queue.pop_front();
        HopCount du = dist[u];
        if (du >= radius) continue;
        for_each_neighbor(g, u, PathMode::UndirectedUnion, true, [&](NodeIndex v) {
            if (dist.emplace(v, du + 1).second) queue.push_back(v);
        });
    }

    Subgraph sub;
    for (auto [node, d] : dist) {
        sub.nodes.push_back(g.id_of(node));
        if (d >= radius) continue;
        for (EdgeKind kind : kAllEdgeKinds) {
            for (NodeIndex v : g.parents(node, kind)) sub.edges.push_back({g.id_of(node), kind, g.id_of(v)});
            for (NodeIndex w : g.children(node, kind)) sub.edges.push_back({g.id_of(w), kind, g.id_of(node)});
        }
    }
    std::sort(sub.nodes.begin(), sub.nodes.end());
    std::sort(sub.edges.begin(), sub.edges.end());
    sub.edges.erase(std::unique(sub.edges.begin(), sub.edges.end()), sub.edges.end());
    return sub;
}

std::vector<HopCount> multi_source_distances(const TaxonomyGraph& g, std::span<const NodeIndex> sources,
                                             Direction direction, HopCount cap) {
    std::vector<HopCount> dist(g.node_count(), kUnreached);
    std::vector<NodeIndex> frontier;
    for (NodeIndex s : sources) {
        if (dist[s] != 0) {
            dist[s] = 0;
            frontier.push_back(s);
        }
    }
    const bool upward = direction == Direction::Upward;
    for (HopCount depth = 0; !frontier.empty() && depth < cap; ++depth) {
        std::vector<NodeIndex> next;
        for (NodeIndex u : frontier) {
            for (EdgeKind kind : kAllEdgeKinds) {
                for (NodeIndex v : upward ? g.parents(u, kind) : g.children(u, kind)) {
                    if (dist[v] == kUnreached) {
                        dist[v] = depth + 1;
                        next.push_back(v);
                    }
                }
            }
        }
        frontier = std::move(next);
    }
    return dist;
}

}  // namespace taxolint
