// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors
#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "taxolint/entity.hpp"
#include "taxolint/graph.hpp"

namespace taxolint::testing {

inline EntityId Q(std::uint64_t n) { return EntityId(n); }

inline Edge p279(std::uint64_t c, std::uint64_t p) { return {Q(c), EdgeKind::SubclassOf, Q(p)}; }
inline Edge p31(std::uint64_t c, std::uint64_t p) { return {Q(c), EdgeKind::InstanceOf, Q(p)}; }

// The shared nine-node fixture: a diamond under Q1 (Q4 via Q2 and Q3), a
// dual-role entity Q6, a redundant shortcut Q9 -> Q1, and a separate
// two-node P279 cycle Q7 <-> Q8.
inline std::vector<Edge> g1_edges() {
    return {p279(2, 1), p279(3, 1), p279(4, 2), p279(4, 3), p279(6, 4), p279(9, 2),
            p279(9, 1), p279(7, 8), p279(8, 7), p31(5, 4),  p31(6, 2)};
}

inline TaxonomyGraph g1() { return build_graph(g1_edges()); }

inline std::filesystem::path data_dir() { return TAXOLINT_TEST_DATA_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << text;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "t") {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("taxolint-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

struct RandomGraphSpec {
    std::size_t nodes = 60;
    std::size_t edges = 120;
    double p31_fraction = 0.3;
    bool plant_patterns = true;
};

// Random P31/P279 edge list over ids drawn sparsely from [1, 10 * nodes].
// With plant_patterns it adds a P279 cycle, a P279 self-loop, a shortcut
// over a two-edge chain, and a dual-role node.
inline std::vector<Edge> random_edges(std::uint64_t seed, const RandomGraphSpec& spec = {}) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> ids;
    std::vector<bool> used(spec.nodes * 10 + 1, false);
    std::uniform_int_distribution<std::uint64_t> pick_id(1, spec.nodes * 10);
    while (ids.size() < spec.nodes) {
        auto id = pick_id(rng);
        if (!used[id]) {
            used[id] = true;
            ids.push_back(id);
        }
    }
    std::uniform_int_distribution<std::size_t> pick(0, spec.nodes - 1);
    std::bernoulli_distribution instance(spec.p31_fraction);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < spec.edges; ++i) {
        auto a = ids[pick(rng)], b = ids[pick(rng)];
        if (a == b) continue;
        edges.push_back(instance(rng) ? p31(a, b) : p279(a, b));
    }
    if (spec.plant_patterns && spec.nodes >= 6) {
        auto a = ids[pick(rng)], b = ids[pick(rng)], c = ids[pick(rng)];
        if (a != b && b != c && a != c) {
            edges.push_back(p279(a, b));
            edges.push_back(p279(b, c));
            edges.push_back(p279(c, a));  // cycle
            edges.push_back(p279(a, c));  // shortcut over a -> b -> c
        }
        auto s = ids[pick(rng)];
        edges.push_back(p279(s, s));
        auto d = ids[pick(rng)], e = ids[pick(rng)], f = ids[pick(rng)];
        if (d != e && d != f) {
            edges.push_back(p279(d, e));
            edges.push_back(p31(d, f));
        }
    }
    return edges;
}

}  // namespace taxolint::testing
