// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors

#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "taxolint/cme.hpp"
#include "taxolint/error.hpp"

using namespace taxolint;
using namespace taxolint::testing;

namespace {

std::vector<std::string> flag_lines(const std::vector<AntiPatternFlag>& flags) {
    std::vector<std::string> out;
    for (const auto& f : flags) out.push_back(f.entity.str() + "," + std::string(tag_name(f.tag)) + "," + f.detail());
    return out;
}

std::set<OracleFlag> as_oracle_set(const std::vector<AntiPatternFlag>& flags) {
    std::set<OracleFlag> out;
    for (const auto& f : flags)
        out.insert({f.entity, std::string(tag_name(f.tag)), f.redundant_parent.value_or(EntityId{})});
    return out;
}

std::vector<EntityId> member_ids(const TaxonomyGraph& g, const ComponentLabeling& l, ComponentId c) {
    std::vector<EntityId> out;
    for (auto u : l.members(c)) out.push_back(g.id_of(u));
    return out;
}

}  // namespace

TEST_CASE("weakly connected components on G1") {
    auto g = g1();
    auto l = weakly_connected_components(g);
    REQUIRE(l.component_count() == 2);
    CHECK(member_ids(g, l, 0) == std::vector<EntityId>{Q(1), Q(2), Q(3), Q(4), Q(5), Q(6), Q(9)});
    CHECK(member_ids(g, l, 1) == std::vector<EntityId>{Q(7), Q(8)});
    CHECK(l.component_sizes == std::vector<std::size_t>{7, 2});

    CHECK(entry_points(g, l, 0) == std::vector<EntityId>{Q(1)});
    CHECK(entry_points(g, l, 1).empty());

    CHECK(weakly_connected_components(build_graph(std::vector<Edge>{})).component_count() == 0);

    GraphBuilder b;
    b.add_node(Q(77));
    auto single = std::move(b).finalize();
    auto sl = weakly_connected_components(single);
    REQUIRE(sl.component_count() == 1);
    CHECK(entry_points(single, sl, 0) == std::vector<EntityId>{Q(77)});
}

TEST_CASE("components agree with a union-find oracle") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::size_t nodes = 20 + seed * 7 % 181;
        auto edges = random_edges(seed, {.nodes = nodes, .edges = nodes * 3 / 4, .p31_fraction = 0.3});
        auto g = build_graph(edges);
        EdgeListModel m(edges);
        auto rep = m.union_find_representatives();
        auto l = weakly_connected_components(g);
        // Same partition, and ids dense in order of each set's smallest member.
        std::map<int, ComponentId> expected_id;
        for (int i = 0; i < m.size(); ++i)
            if (rep[i] == i) expected_id.emplace(i, static_cast<ComponentId>(expected_id.size()));
        REQUIRE(l.component_count() == expected_id.size());
        for (int i = 0; i < m.size(); ++i) CHECK(l.component_of[g.index_of(m.id(i))] == expected_id[rep[i]]);
    }
}

TEST_CASE("anti-pattern flags on G1") {
    auto g = g1();
    auto flags = detect_anti_patterns(g, MetaclassPolicy{}, {.max_paths = 5});
    CHECK(flag_lines(flags) == std::vector<std::string>{
                                   "Q6,DualRole,p31:Q2",
                                   "Q7,CycleMember,cycle:Q7-Q8",
                                   "Q8,CycleMember,cycle:Q7-Q8",
                                   "Q9,RedundantEdge,to:Q1 via:Q2",
                               });
    REQUIRE(flags[3].witnesses.size() == 1);
    CHECK(flags[3].witnesses[0] == std::vector<EntityId>{Q(9), Q(2), Q(1)});

    SUBCASE("whitelisted P31 target suppresses DualRole") {
        MetaclassPolicy policy;
        policy.abstract_class_ids = {Q(2)};
        auto w = detect_anti_patterns(g, policy);
        CHECK(flag_lines(w) == std::vector<std::string>{
                                   "Q7,CycleMember,cycle:Q7-Q8",
                                   "Q8,CycleMember,cycle:Q7-Q8",
                                   "Q9,RedundantEdge,to:Q1 via:Q2",
                               });
    }
    SUBCASE("parallel detection is identical") {
        CHECK(detect_anti_patterns(g, MetaclassPolicy{}, {.max_paths = 5, .jobs = 4}) == flags);
    }
}

TEST_CASE("clean chain has no flags") {
    auto g = build_graph(std::vector<Edge>{p279(1, 2), p279(2, 3)});
    CHECK(detect_anti_patterns(g, MetaclassPolicy{}).empty());
}

TEST_CASE("instance with subclasses and self-loops") {
    auto g = build_graph(std::vector<Edge>{p31(10, 20), p279(11, 10), p279(12, 12), p31(13, 13)});
    CHECK(flag_lines(detect_anti_patterns(g, MetaclassPolicy{})) ==
          std::vector<std::string>{"Q10,InstanceWithSubclasses,p31:Q20", "Q12,CycleMember,cycle:Q12",
                                   "Q12,SelfLoop,self:P279", "Q13,SelfLoop,self:P31"});
}

TEST_CASE("redundancy witnesses respect max_paths") {
    // 1 -> 5 shadowed by 1 -> 2 -> 5, 1 -> 3 -> 5, 1 -> 4 -> 5, 1 -> 2 -> 3 -> 5
    auto g = build_graph(std::vector<Edge>{p279(1, 5), p279(1, 2), p279(1, 3), p279(1, 4), p279(2, 5), p279(3, 5),
                                           p279(4, 5), p279(2, 3)});
    for (std::size_t k : {1u, 2u, 3u, 4u, 64u}) {
        auto found = redundant_edges_of(g, Q(1), k);
        std::vector<AntiPatternFlag> to5;
        for (auto& f : found)
            if (f.redundant_parent == Q(5)) to5.push_back(f);
        REQUIRE(to5.size() == 1);
        CHECK(to5[0].witnesses.size() == std::min<std::size_t>(k, 4));
        for (const auto& w : to5[0].witnesses) {
            CHECK(w.front() == Q(1));
            CHECK(w.back() == Q(5));
            CHECK(w.size() >= 3);
        }
    }
    CHECK(redundant_edges_of(g, Q(4), 5).empty());
}

TEST_CASE("flags are sound and complete against a brute-force oracle") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::size_t nodes = 10 + seed * 13 % 191;
        auto edges = random_edges(seed, {.nodes = nodes, .edges = nodes * 2, .p31_fraction = 0.25});
        auto g = build_graph(edges);
        EdgeListModel m(edges);
        std::set<EntityId> abstract_ids;
        if (!edges.empty()) abstract_ids.insert(edges[seed % edges.size()].parent);
        MetaclassPolicy policy;
        policy.abstract_class_ids = abstract_ids;

        auto flags = detect_anti_patterns(g, policy, {.max_paths = 3});
        CHECK(as_oracle_set(flags) == oracle_flags(m, abstract_ids));

        const auto cycle = m.on_subclass_cycle();
        for (const auto& f : flags) {
            if (f.tag == AntiPatternTag::CycleMember) CHECK(cycle[m.idx(f.entity)]);
            if (f.tag != AntiPatternTag::RedundantEdge) continue;
            REQUIRE(f.redundant_parent);
            CHECK_FALSE(f.witnesses.empty());
            CHECK(f.witnesses.size() <= 3);
            for (const auto& w : f.witnesses) {
                REQUIRE(w.size() >= 3);
                CHECK(w.front() == f.entity);
                CHECK(w.back() == *f.redundant_parent);
                std::set<EntityId> distinct(w.begin(), w.end());
                CHECK(distinct.size() == w.size());
                for (std::size_t i = 0; i + 1 < w.size(); ++i)
                    CHECK(m.has(m.idx(w[i]), EdgeKind::SubclassOf, m.idx(w[i + 1])));
            }
        }
        std::vector<AntiPatternFlag> sorted = flags;
        CHECK(std::is_sorted(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
            return std::tie(a.entity, a.tag) < std::tie(b.entity, b.tag);
        }));
    }
}

TEST_CASE("pure-class filter on G1") {
    auto r = pure_class_filter(g1());
    CHECK(r.pure_classes == std::vector<EntityId>{Q(2), Q(3), Q(6)});
    CHECK(r.pure_with_instances == std::vector<EntityId>{Q(2)});
    // Q2's subclass closure {Q2, Q4, Q6, Q9} has Q4 and Q9 with a second
    // parent outside, each single-parented inside the closure.
    CHECK(r.tree_roots == std::vector<EntityId>{Q(2)});
    CHECK(r.instances_covered == 2);  // Q5 -> Q4, Q6 -> Q2
    CHECK(r.coverage_ratio == doctest::Approx(2.0 / 9.0));
}

TEST_CASE("pure-class filter edge cases") {
    SUBCASE("no P31 edges") {
        auto r = pure_class_filter(build_graph(std::vector<Edge>{p279(1, 2), p279(3, 2)}));
        CHECK(r.pure_classes == std::vector<EntityId>{Q(1), Q(3)});
        CHECK(r.pure_with_instances.empty());
        CHECK(r.tree_roots.empty());
        CHECK(r.instances_covered == 0);
    }
    SUBCASE("closure with a diamond is not a tree") {
        // 10 is pure with an instance; its subclasses 11, 12 both feed 13.
        auto r = pure_class_filter(build_graph(
            std::vector<Edge>{p279(10, 1), p31(20, 10), p279(11, 10), p279(12, 10), p279(13, 11), p279(13, 12)}));
        CHECK(std::count(r.tree_roots.begin(), r.tree_roots.end(), Q(10)) == 0);
    }
    SUBCASE("permutation invariance") {
        auto edges = random_edges(3, {.nodes = 150, .edges = 220});
        auto base = pure_class_filter(build_graph(edges));
        std::mt19937_64 rng(9);
        for (int i = 0; i < 5; ++i) {
            std::shuffle(edges.begin(), edges.end(), rng);
            auto r = pure_class_filter(build_graph(edges));
            CHECK(r.pure_classes == base.pure_classes);
            CHECK(r.tree_roots == base.tree_roots);
            CHECK(r.instances_covered == base.instances_covered);
        }
    }
}

TEST_CASE("sample_component") {
    auto g = g1();
    auto all = sample_component(g, Q(1), 100, 1);
    CHECK(all == std::vector<EntityId>{Q(2), Q(3), Q(4), Q(5), Q(6), Q(9)});
    CHECK(sample_component(g, Q(4), 1, 42).size() == 1);
    CHECK(sample_component(g, Q(6), 1, 42).empty());
    CHECK(sample_component(g, Q(2), 2, 7) == sample_component(g, Q(2), 2, 7));
    CHECK_THROWS_AS(sample_component(g, Q(100), 1, 0), UnknownEntity);

    // Single forced choice.
    auto chain = build_graph(std::vector<Edge>{p279(2, 1)});
    CHECK(sample_component(chain, Q(1), 1, 3) == std::vector<EntityId>{Q(2)});

    // Roughly uniform: every descendant of a star is drawn.
    std::vector<Edge> star;
    for (std::uint64_t i = 2; i <= 21; ++i) star.push_back(p279(i, 1));
    auto sg = build_graph(star);
    std::map<EntityId, int> hits;
    for (std::uint64_t s = 0; s < 2000; ++s)
        for (auto id : sample_component(sg, Q(1), 5, s)) ++hits[id];
    CHECK(hits.size() == 20);
    for (auto& [id, c] : hits) CHECK(c == doctest::Approx(500).epsilon(0.2));
}
