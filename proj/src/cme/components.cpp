// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors

#include <algorithm>
#include <random>

#include "taxolint/cme.hpp"
#include "taxolint/error.hpp"

namespace taxolint {

ComponentLabeling weakly_connected_components(const TaxonomyGraph& g) {
    constexpr ComponentId kUnlabeled = static_cast<ComponentId>(-1);
    const std::size_t n = g.node_count();
    ComponentLabeling out;
    out.component_of.assign(n, kUnlabeled);
    out.member_nodes.reserve(n);
    out.member_offsets.push_back(0);

    // Nodes are indexed by ascending id, so scanning in index order opens each
    // component at its smallest member.
    std::vector<NodeIndex> stack;
    for (NodeIndex start = 0; start < n; ++start) {
        if (out.component_of[start] != kUnlabeled) continue;
        const auto c = static_cast<ComponentId>(out.component_sizes.size());
        const std::size_t first = out.member_nodes.size();
        out.component_of[start] = c;
        stack.push_back(start);
        while (!stack.empty()) {
            NodeIndex u = stack.back();
            stack.pop_back();
            out.member_nodes.push_back(u);
            auto visit = [&](NodeIndex v) {
                if (out.component_of[v] == kUnlabeled) {
                    out.component_of[v] = c;
                    stack.push_back(v);
                }
            };
            for (EdgeKind kind : kAllEdgeKinds) {
                for (NodeIndex v : g.parents(u, kind)) visit(v);
                for (NodeIndex v : g.children(u, kind)) visit(v);
            }
        }
        std::sort(out.member_nodes.begin() + static_cast<std::ptrdiff_t>(first), out.member_nodes.end());
        out.component_sizes.push_back(out.member_nodes.size() - first);
        out.member_offsets.push_back(out.member_nodes.size());
    }
    return out;
}

std::vector<EntityId> entry_points(const TaxonomyGraph& g, const ComponentLabeling& labeling,
                                   ComponentId component) {
    std::vector<EntityId> out;
    if (component >= labeling.component_count()) return out;
    for (NodeIndex u : labeling.members(component)) {
        if (g.out_degree(u) == 0) out.push_back(g.id_of(u));
    }
    return out;
}

std::vector<EntityId> sample_component(const TaxonomyGraph& g, EntityId seed_root, std::size_t size,
                                       std::uint64_t rng_seed) {
    const NodeIndex root = g.index_of(seed_root);
    std::vector<bool> seen(g.node_count(), false);
    std::vector<NodeIndex> stack{root};
    std::vector<EntityId> descendants;
    seen[root] = true;
    while (!stack.empty()) {
        NodeIndex u = stack.back();
        stack.pop_back();
        for (EdgeKind kind : kAllEdgeKinds) {
            for (NodeIndex v : g.children(u, kind)) {
                if (seen[v]) continue;
                seen[v] = true;
                descendants.push_back(g.id_of(v));
                stack.push_back(v);
            }
        }
    }
    std::sort(descendants.begin(), descendants.end());
    if (size >= descendants.size()) return descendants;

    // Partial Fisher-Yates over the sorted list. Bounded draws use rejection on
    // the raw engine output so the sample is identical across standard libraries.
    std::mt19937_64 rng(rng_seed);
    auto draw_below = [&rng](std::uint64_t bound) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x;
        do {
            x = rng();
        } while (x >= limit);
        return x % bound;
    };
    for (std::size_t i = 0; i < size; ++i) {
        std::size_t j = i + static_cast<std::size_t>(draw_below(descendants.size() - i));
        std::swap(descendants[i], descendants[j]);
    }
    descendants.resize(size);
    std::sort(descendants.begin(), descendants.end());
    return descendants;
}

}  // namespace taxolint
