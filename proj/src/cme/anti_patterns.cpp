// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "taxolint/cme.hpp"
#include "taxolint/error.hpp"
#include "taxolint/parallel.hpp"

namespace taxolint {

namespace {

constexpr std::string_view kTagNames[] = {"DualRole", "InstanceWithSubclasses", "CycleMember", "RedundantEdge",
                                          "SelfLoop"};

std::string join_ids(const std::vector<EntityId>& ids, char sep) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += sep;
        out += ids[i].str();
    }
    return out;
}

// Strongly connected components of the P279 subgraph (iterative Tarjan).
// Returns the component index per node and each component's members.
struct SccResult {
    std::vector<std::uint32_t> scc_of;
    std::vector<std::vector<NodeIndex>> members;
};

SccResult subclass_sccs(const TaxonomyGraph& g) {
    constexpr std::uint32_t kNone = static_cast<std::uint32_t>(-1);
    const std::size_t n = g.node_count();
    std::vector<std::uint32_t> index(n, kNone), lowlink(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<NodeIndex> stack;
    SccResult out;
    out.scc_of.assign(n, kNone);
    std::uint32_t counter = 0;

    struct Frame {
        NodeIndex node;
        std::size_t next_child;
    };
    std::vector<Frame> call;
    for (NodeIndex root = 0; root < n; ++root) {
        if (index[root] != kNone) continue;
        call.push_back({root, 0});
        index[root] = lowlink[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            auto parents = g.parents(f.node, EdgeKind::SubclassOf);
            if (f.next_child < parents.size()) {
                NodeIndex w = parents[f.next_child++];
                if (index[w] == kNone) {
                    index[w] = lowlink[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[f.node] = std::min(lowlink[f.node], index[w]);
                }
                continue;
            }
            NodeIndex v = f.node;
            call.pop_back();
            if (!call.empty()) lowlink[call.back().node] = std::min(lowlink[call.back().node], lowlink[v]);
            if (lowlink[v] == index[v]) {
                const auto id = static_cast<std::uint32_t>(out.members.size());
                auto& comp = out.members.emplace_back();
                NodeIndex w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    out.scc_of[w] = id;
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
            }
        }
    }
    return out;
}

bool has_self_loop(const TaxonomyGraph& g, NodeIndex u, EdgeKind kind) {
    auto p = g.parents(u, kind);
    return std::binary_search(p.begin(), p.end(), u);
}

// Visit stamps and BFS predecessors. Dense arrays for whole-graph scans,
// a hash map for one-off queries on large graphs.
class Scratch {
public:
    Scratch(std::size_t n, bool dense) : dense_(dense) {
        if (dense_) {
            stamp_.assign(n, 0);
            pred_.assign(n, 0);
        }
    }
    std::uint32_t stamp(NodeIndex u) const {
        if (dense_) return stamp_[u];
        auto it = sparse_.find(u);
        return it == sparse_.end() ? 0 : it->second.first;
    }
    void set_stamp(NodeIndex u, std::uint32_t s) {
        if (dense_) stamp_[u] = s;
        else sparse_[u].first = s;
    }
    NodeIndex pred(NodeIndex u) const { return dense_ ? pred_[u] : sparse_.at(u).second; }
    void set_pred(NodeIndex u, NodeIndex p) {
        if (dense_) pred_[u] = p;
        else sparse_[u].second = p;
    }
    void reset() {
        if (!dense_) sparse_.clear();
    }

private:
    bool dense_;
    std::vector<std::uint32_t> stamp_;
    std::vector<NodeIndex> pred_;
    std::unordered_map<NodeIndex, std::pair<std::uint32_t, NodeIndex>> sparse_;
};

// Per-thread state for upward P279 searches.
class RedundancySearch {
public:
    RedundancySearch(const TaxonomyGraph& g, std::size_t max_paths, HopCount depth, bool dense = true)
        : g_(g), max_paths_(max_paths), depth_(depth), scratch_(g.node_count(), dense) {}

    // Direct P279 parents of u that are also reachable via a longer simple path.
    void run(NodeIndex u, std::vector<AntiPatternFlag>& out) {
        auto parents = g_.parents(u, EdgeKind::SubclassOf);
        std::vector<NodeIndex> direct;
        for (NodeIndex p : parents) {
            if (p != u) direct.push_back(p);
        }
        if (direct.size() < 2) return;

        for (NodeIndex a : direct) {
            auto shortest = shortest_witness(u, a, direct);
            if (!shortest) continue;
            AntiPatternFlag flag;
            flag.entity = g_.id_of(u);
            flag.tag = AntiPatternTag::RedundantEdge;
            flag.redundant_parent = g_.id_of(a);
            enumerate_witnesses(u, a, flag.witnesses);
            if (flag.witnesses.empty()) flag.witnesses.push_back(std::move(*shortest));
            out.push_back(std::move(flag));
        }
    }

private:
    // BFS from u's other parents towards a, never re-entering u.
    std::optional<std::vector<EntityId>> shortest_witness(NodeIndex u, NodeIndex a,
                                                          const std::vector<NodeIndex>& direct) {
        next_generation();
        scratch_.set_stamp(u, generation_);
        std::deque<NodeIndex> queue;
        for (NodeIndex p : direct) {
            if (p == a) continue;
            scratch_.set_stamp(p, generation_);
            scratch_.set_pred(p, u);
            queue.push_back(p);
        }
        while (!queue.empty()) {
            NodeIndex x = queue.front();
            queue.pop_front();
            for (NodeIndex y : g_.parents(x, EdgeKind::SubclassOf)) {
                if (scratch_.stamp(y) == generation_) continue;
                scratch_.set_stamp(y, generation_);
                scratch_.set_pred(y, x);
                if (y == a) {
                    std::vector<EntityId> path{g_.id_of(a)};
                    for (NodeIndex z = x; z != u; z = scratch_.pred(z)) path.push_back(g_.id_of(z));
                    path.push_back(g_.id_of(u));
                    std::reverse(path.begin(), path.end());
                    return path;
                }
                queue.push_back(y);
            }
        }
        return std::nullopt;
    }

    // Depth-bounded DFS over simple paths u -> p -> ... -> a with p != a, in
    // ascending adjacency order, stopping at max_paths witnesses.
    void enumerate_witnesses(NodeIndex u, NodeIndex a, std::vector<std::vector<EntityId>>& out) {
        std::vector<NodeIndex> path{u};
        std::size_t budget = kExpansionBudget;
        next_generation();
        scratch_.set_stamp(u, generation_);
        dfs(u, a, path, out, budget, true);
    }

    void dfs(NodeIndex x, NodeIndex a, std::vector<NodeIndex>& path, std::vector<std::vector<EntityId>>& out,
             std::size_t& budget, bool first_hop) {
        if (out.size() >= max_paths_ || budget == 0) return;
        --budget;
        const auto edges_so_far = static_cast<HopCount>(path.size() - 1);
        if (edges_so_far >= depth_) return;
        for (NodeIndex y : g_.parents(x, EdgeKind::SubclassOf)) {
            if (out.size() >= max_paths_) return;
            if (y == a) {
                if (first_hop) continue;
                std::vector<EntityId> witness;
                witness.reserve(path.size() + 1);
                for (NodeIndex z : path) witness.push_back(g_.id_of(z));
                witness.push_back(g_.id_of(a));
                out.push_back(std::move(witness));
                continue;
            }
            if (scratch_.stamp(y) == generation_) continue;
            scratch_.set_stamp(y, generation_);
            path.push_back(y);
            dfs(y, a, path, out, budget, false);
            path.pop_back();
            scratch_.set_stamp(y, 0);
        }
    }

    void next_generation() {
        ++generation_;
        scratch_.reset();
    }

    static constexpr std::size_t kExpansionBudget = 100000;

    const TaxonomyGraph& g_;
    std::size_t max_paths_;
    HopCount depth_;
    Scratch scratch_;
    std::uint32_t generation_ = 0;
};

AntiPatternFlag make_flag(EntityId id, AntiPatternTag tag) {
    AntiPatternFlag f;
    f.entity = id;
    f.tag = tag;
    return f;
}

bool flag_less(const AntiPatternFlag& a, const AntiPatternFlag& b) {
    if (a.entity != b.entity) return a.entity < b.entity;
    if (a.tag != b.tag) return a.tag < b.tag;
    return a.detail() < b.detail();
}

}  // namespace

std::string_view tag_name(AntiPatternTag tag) noexcept { return kTagNames[static_cast<int>(tag)]; }

std::optional<AntiPatternTag> parse_tag(std::string_view name) noexcept {
    for (std::size_t i = 0; i < std::size(kTagNames); ++i) {
        if (kTagNames[i] == name) return static_cast<AntiPatternTag>(i);
    }
    return std::nullopt;
}

std::string AntiPatternFlag::detail() const {
    switch (tag) {
        case AntiPatternTag::DualRole:
        case AntiPatternTag::InstanceWithSubclasses:
            return "p31:" + join_ids(instance_targets, '|');
        case AntiPatternTag::CycleMember:
            return "cycle:" + join_ids(cycle, '-');
        case AntiPatternTag::RedundantEdge: {
            std::string out = "to:" + (redundant_parent ? redundant_parent->str() : std::string("?")) + " via:";
            for (std::size_t w = 0; w < witnesses.size(); ++w) {
                if (w) out += '|';
                const auto& path = witnesses[w];
                for (std::size_t i = 1; i + 1 < path.size(); ++i) {
                    if (i > 1) out += '>';
                    out += path[i].str();
                }
            }
            return out;
        }
        case AntiPatternTag::SelfLoop:
            return "self:" + std::string(property_name(loop_kind.value_or(EdgeKind::SubclassOf)));
    }
    return {};
}

std::vector<bool> subclass_cycle_nodes(const TaxonomyGraph& g) {
    SccResult scc = subclass_sccs(g);
    std::vector<bool> out(g.node_count(), false);
    for (NodeIndex u = 0; u < g.node_count(); ++u) {
        out[u] = scc.members[scc.scc_of[u]].size() >= 2 || has_self_loop(g, u, EdgeKind::SubclassOf);
    }
    return out;
}

std::vector<AntiPatternFlag> detect_anti_patterns(const TaxonomyGraph& g, const MetaclassPolicy& policy,
                                                  const DetectorOptions& options) {
    if (options.max_paths == 0) throw InvalidConfig("max_paths must be >= 1");
    const SccResult scc = subclass_sccs(g);
    const std::size_t n = g.node_count();

    const unsigned jobs = std::max(1u, options.jobs);
    const std::size_t chunks = std::min<std::size_t>(n, jobs * 8u);
    std::vector<std::vector<AntiPatternFlag>> per_chunk(std::max<std::size_t>(chunks, 1));
    const std::size_t chunk_size = chunks == 0 ? 0 : (n + chunks - 1) / chunks;

    parallel_chunks(chunks, jobs, [&](std::size_t begin, std::size_t end) {
        RedundancySearch redundancy(g, options.max_paths, options.witness_depth);
        for (std::size_t c = begin; c < end; ++c) {
            auto& out = per_chunk[c];
            const std::size_t lo = c * chunk_size;
            const std::size_t hi = std::min(n, lo + chunk_size);
            for (std::size_t i = lo; i < hi; ++i) {
                const auto u = static_cast<NodeIndex>(i);
                const std::size_t first = out.size();
                const EntityId id = g.id_of(u);

                std::vector<EntityId> meaningful;
                for (NodeIndex v : g.parents(u, EdgeKind::InstanceOf)) {
                    if (!policy.is_abstract(g.id_of(v))) meaningful.push_back(g.id_of(v));
                }
                if (!meaningful.empty()) {
                    if (!g.parents(u, EdgeKind::SubclassOf).empty()) {
                        AntiPatternFlag f = make_flag(id, AntiPatternTag::DualRole);
                        f.instance_targets = meaningful;
                        out.push_back(std::move(f));
                    }
                    if (!g.children(u, EdgeKind::SubclassOf).empty()) {
                        AntiPatternFlag f = make_flag(id, AntiPatternTag::InstanceWithSubclasses);
                        f.instance_targets = meaningful;
                        out.push_back(std::move(f));
                    }
                }

                const auto& comp = scc.members[scc.scc_of[u]];
                const bool subclass_loop = has_self_loop(g, u, EdgeKind::SubclassOf);
                if (comp.size() >= 2 || subclass_loop) {
                    AntiPatternFlag f = make_flag(id, AntiPatternTag::CycleMember);
                    for (NodeIndex m : comp) f.cycle.push_back(g.id_of(m));
                    out.push_back(std::move(f));
                }

                redundancy.run(u, out);

                for (EdgeKind kind : kAllEdgeKinds) {
                    if (has_self_loop(g, u, kind)) {
                        AntiPatternFlag f = make_flag(id, AntiPatternTag::SelfLoop);
                        f.loop_kind = kind;
                        out.push_back(std::move(f));
                    }
                }
                std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(), flag_less);
            }
        }
    });

    std::vector<AntiPatternFlag> flags;
    for (auto& chunk : per_chunk) std::move(chunk.begin(), chunk.end(), std::back_inserter(flags));
    return flags;
}

std::vector<AntiPatternFlag> redundant_edges_of(const TaxonomyGraph& g, EntityId entity, std::size_t max_paths,
                                                HopCount witness_depth) {
    if (max_paths == 0) throw InvalidConfig("max_paths must be >= 1");
    const NodeIndex u = g.index_of(entity);
    RedundancySearch search(g, max_paths, witness_depth, /*dense=*/false);
    std::vector<AntiPatternFlag> out;
    search.run(u, out);
    std::sort(out.begin(), out.end(), flag_less);
    return out;
}

}  // namespace taxolint
