// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors

#include <algorithm>

#include "taxolint/cme.hpp"

namespace taxolint {

namespace {

// Collects root's P279 descendant closure (root included) into `closure`
// and reports whether every member other than the root has exactly one
// P279 parent inside it, and the root none.
bool closure_is_tree(const TaxonomyGraph& g, NodeIndex root, std::vector<std::uint32_t>& stamp,
                     std::uint32_t generation, std::vector<NodeIndex>& closure) {
    closure.clear();
    closure.push_back(root);
    stamp[root] = generation;
    for (std::size_t i = 0; i < closure.size(); ++i) {
        for (NodeIndex child : g.children(closure[i], EdgeKind::SubclassOf)) {
            if (stamp[child] == generation) continue;
            stamp[child] = generation;
            closure.push_back(child);
        }
    }
    for (NodeIndex u : closure) {
        std::size_t inside = 0;
        for (NodeIndex p : g.parents(u, EdgeKind::SubclassOf)) {
            if (stamp[p] == generation) ++inside;
        }
        if (inside != (u == root ? 0u : 1u)) return false;
    }
    return true;
}

}  // namespace

PureClassReport pure_class_filter(const TaxonomyGraph& g) {
    const std::size_t n = g.node_count();
    const std::vector<bool> on_cycle = subclass_cycle_nodes(g);
    PureClassReport report;

    std::vector<NodeIndex> with_instances;
    for (NodeIndex u = 0; u < n; ++u) {
        if (on_cycle[u]) continue;
        if (g.parents(u, EdgeKind::SubclassOf).size() != 1) continue;
        if (g.parents(u, EdgeKind::InstanceOf).size() > 2) continue;
        report.pure_classes.push_back(g.id_of(u));
        if (!g.children(u, EdgeKind::InstanceOf).empty()) {
            report.pure_with_instances.push_back(g.id_of(u));
            with_instances.push_back(u);
        }
    }

    std::vector<std::uint32_t> stamp(n, 0);
    std::vector<bool> in_tree(n, false);
    std::vector<NodeIndex> closure;
    std::uint32_t generation = 0;
    for (NodeIndex root : with_instances) {
        if (!closure_is_tree(g, root, stamp, ++generation, closure)) continue;
        report.tree_roots.push_back(g.id_of(root));
        for (NodeIndex u : closure) in_tree[u] = true;
    }

    for (NodeIndex u = 0; u < n; ++u) {
        auto targets = g.parents(u, EdgeKind::InstanceOf);
        if (std::any_of(targets.begin(), targets.end(), [&](NodeIndex v) { return in_tree[v]; }))
            ++report.instances_covered;
    }
    report.coverage_ratio = n == 0 ? 0.0 : static_cast<double>(report.instances_covered) / static_cast<double>(n);
    return report;
}

}  // namespace taxolint
