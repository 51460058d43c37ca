// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors

#include <algorithm>

#include "taxolint/drift.hpp"
#include "taxolint/error.hpp"

namespace taxolint {

std::string_view segment_name(Segment s) noexcept {
    switch (s) {
        case Segment::A: return "A";
        case Segment::C: return "C";
        case Segment::E: return "E";
        case Segment::Other: return "Other";
    }
    return "Other";
}

Segment parse_segment(std::string_view s) {
    if (s == "A") return Segment::A;
    if (s == "C") return Segment::C;
    if (s == "E") return Segment::E;
    if (s == "Other") return Segment::Other;
    throw MalformedLine("unknown segment '" + std::string(s) + "'");
}

Segment classify_segment(std::size_t parent_cnt, HopCount min_depth) noexcept {
    if (parent_cnt > 6) return Segment::E;
    if (min_depth > 2) return Segment::Other;
    return parent_cnt <= 2 ? Segment::A : Segment::C;
}

namespace {

std::vector<NodeIndex> pseudo_roots(const TaxonomyGraph& g) {
    std::vector<NodeIndex> roots;
    for (NodeIndex u = 0; u < g.node_count(); ++u) {
        if (g.out_degree(u) == 0) roots.push_back(u);
    }
    return roots;
}

std::size_t distinct_parent_count(const TaxonomyGraph& g, NodeIndex u) {
    auto parents = g.union_parents(u);
    return parents.size() - static_cast<std::size_t>(std::count(parents.begin(), parents.end(), u));
}

}  // namespace

ScreeningResult screen(const TaxonomyGraph& clean) {
    const auto roots = pseudo_roots(clean);
    const auto depth = multi_source_distances(clean, roots, Direction::Downward);
    ScreeningResult out;
    for (NodeIndex u = 0; u < clean.node_count(); ++u) {
        if (clean.out_degree(u) == 0) continue;  // pseudo-roots have no parents at all
        const std::size_t cnt = distinct_parent_count(clean, u);
        if (cnt < 2) {
            ++out.discarded;
            continue;
        }
        ScreeningRecord r;
        r.entity = clean.id_of(u);
        r.parent_cnt = cnt;
        r.min_depth = depth[u];
        r.segment = classify_segment(cnt, depth[u]);
        out.records.push_back(r);
    }
    return out;
}

std::string root_label(EntityId root) { return root.valid() ? root.str() : std::string("unrooted"); }

std::optional<EntityId> parse_root_label(std::string_view text) {
    if (text == "unrooted") return kUnrootedComponent;
    return EntityId::parse(text);
}

RootAssignment assign_pseudo_roots(const TaxonomyGraph& clean) {
    const std::size_t n = clean.node_count();
    RootAssignment out;
    out.root_of.assign(n, kUnrootedComponent);
    out.distance.assign(n, kUnreached);

    // Level-synchronous so every node at distance d sees all of its
    // distance d-1 parents before its root is fixed.
    std::vector<NodeIndex> frontier = pseudo_roots(clean);
    for (NodeIndex r : frontier) {
        out.root_of[r] = clean.id_of(r);
        out.distance[r] = 0;
    }
    std::vector<NodeIndex> next;
    for (HopCount level = 1; !frontier.empty(); ++level) {
        next.clear();
        for (NodeIndex u : frontier) {
            for (EdgeKind kind : kAllEdgeKinds) {
                for (NodeIndex v : clean.children(u, kind)) {
                    if (out.distance[v] == kUnreached) {
                        out.distance[v] = level;
                        out.root_of[v] = out.root_of[u];
                        next.push_back(v);
                    } else if (out.distance[v] == level && out.root_of[u] < out.root_of[v]) {
                        out.root_of[v] = out.root_of[u];
                    }
                }
            }
        }
        frontier.swap(next);
    }
    return out;
}

}  // namespace taxolint
