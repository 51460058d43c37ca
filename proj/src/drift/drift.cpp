// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "taxolint/drift.hpp"
#include "taxolint/error.hpp"
#include "taxolint/parallel.hpp"

namespace taxolint {

std::string compose_text(std::string_view label, std::string_view description) {
    std::string out(label);
    if (!label.empty() && !description.empty()) out += ". ";
    out += description;
    return out;
}

std::string compose_text(const EntityText& text) { return compose_text(text.label, text.description); }

Embedding Embedder::embed(const EntityText& text) {
    const std::string composed = compose_text(text);
    if (composed.empty()) throw EmptyText("no label or description for " + text.entity.str());
    auto out = embed_many(std::span<const std::string>(&composed, 1));
    return std::move(*out.front());
}

std::vector<std::optional<Embedding>> Embedder::embed_many(std::span<const std::string> texts) {
    const std::string identity = provider_.identity();
    std::vector<std::optional<Embedding>> out(texts.size());
    std::vector<std::string> misses;
    std::vector<CacheKey> miss_keys;
    std::map<CacheKey, std::vector<std::size_t>> waiting;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (texts[i].empty()) continue;
        const CacheKey key = embedding_cache_key(identity, texts[i]);
        if (auto hit = cache_.get(key)) {
            out[i] = std::move(hit);
            continue;
        }
        auto [it, fresh] = waiting.try_emplace(key);
        it->second.push_back(i);
        if (fresh) {
            misses.push_back(texts[i]);
            miss_keys.push_back(key);
        }
    }
    if (misses.empty()) return out;

    ++provider_calls_;
    auto vectors = provider_.embed_batch(misses);
    if (vectors.size() != misses.size()) throw ProviderUnavailable("provider returned the wrong number of vectors");
    for (std::size_t m = 0; m < misses.size(); ++m) {
        if (vectors[m].size() != provider_.dimension())
            throw ProviderUnavailable("provider returned a vector of the wrong dimension");
        cache_.put(miss_keys[m], vectors[m]);
        for (std::size_t i : waiting[miss_keys[m]]) out[i] = vectors[m];
    }
    return out;
}

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size()) throw InvalidConfig("cosine of vectors with different dimensions");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

std::vector<double> mean_parent_embedding(std::span<const Embedding> parents) {
    if (parents.size() < 2) throw TooFewParents("drift needs at least two parent embeddings");
    const std::size_t d = parents.front().size();
    std::vector<double> mean(d, 0.0);
    for (const auto& p : parents) {
        if (p.size() != d) throw InvalidConfig("parent embeddings differ in dimension");
        for (std::size_t i = 0; i < d; ++i) mean[i] += p[i];
    }
    for (double& x : mean) x /= static_cast<double>(parents.size());
    return mean;
}

DriftValues compute_drift(std::span<const float> entity, std::span<const Embedding> parents, double threshold) {
    const auto mean = mean_parent_embedding(parents);
    if (mean.size() != entity.size()) throw InvalidConfig("entity and parent embeddings differ in dimension");
    double dot = 0.0, ne = 0.0, nm = 0.0;
    for (std::size_t i = 0; i < mean.size(); ++i) {
        dot += entity[i] * mean[i];
        ne += static_cast<double>(entity[i]) * entity[i];
        nm += mean[i] * mean[i];
    }
    DriftValues v;
    v.n = parents.size();
    // A vanishing centroid has no direction; treat it as maximal ignorance.
    constexpr double kDegenerate = 1e-24;
    if (nm <= kDegenerate || ne <= kDegenerate) {
        v.drift_raw = 1.0;
    } else {
        v.drift_raw = 1.0 - std::clamp(dot / (std::sqrt(ne) * std::sqrt(nm)), -1.0, 1.0);
    }
    v.drift_adj = v.drift_raw * std::log(static_cast<double>(v.n) + 1.0);
    v.flagged = v.drift_adj >= threshold;
    return v;
}

namespace {

DriftScanResult scan_records(const TaxonomyGraph& clean, const TextIndex& texts, Embedder& embedder,
                             std::vector<ScreeningRecord> screened, std::size_t discarded,
                             std::vector<EntityId> skipped, const DriftScanOptions& options) {
    DriftScanResult out;
    out.discarded = discarded;
    out.skipped = std::move(skipped);

    // Every node whose vector is needed: screened entities and their parents.
    std::vector<NodeIndex> needed;
    for (const auto& r : screened) {
        const NodeIndex u = clean.index_of(r.entity);
        needed.push_back(u);
        for (NodeIndex p : clean.union_parents(u)) needed.push_back(p);
    }
    std::sort(needed.begin(), needed.end());
    needed.erase(std::unique(needed.begin(), needed.end()), needed.end());

    std::vector<std::string> composed(needed.size());
    for (std::size_t i = 0; i < needed.size(); ++i) {
        if (const EntityText* t = texts.find_with_fallback(clean.id_of(needed[i]), options.language))
            composed[i] = compose_text(*t);
    }
    std::vector<std::optional<Embedding>> vectors(needed.size());
    constexpr std::size_t kBatch = 256;
    const std::size_t batches = (needed.size() + kBatch - 1) / kBatch;
    parallel_chunks(batches, options.jobs, [&](std::size_t b0, std::size_t b1) {
        for (std::size_t b = b0; b < b1; ++b) {
            const std::size_t lo = b * kBatch, hi = std::min(needed.size(), lo + kBatch);
            auto got = embedder.embed_many(std::span<const std::string>(composed).subspan(lo, hi - lo));
            for (std::size_t i = lo; i < hi; ++i) vectors[i] = std::move(got[i - lo]);
        }
    });
    auto vector_of = [&](NodeIndex u) -> const std::optional<Embedding>& {
        auto it = std::lower_bound(needed.begin(), needed.end(), u);
        return vectors[static_cast<std::size_t>(it - needed.begin())];
    };

    std::vector<std::optional<DriftRecord>> computed(screened.size());
    parallel_chunks(screened.size(), options.jobs, [&](std::size_t lo, std::size_t hi) {
        std::vector<Embedding> parents;
        for (std::size_t i = lo; i < hi; ++i) {
            const auto& s = screened[i];
            const NodeIndex u = clean.index_of(s.entity);
            const auto& ev = vector_of(u);
            if (!ev) continue;
            parents.clear();
            for (NodeIndex p : clean.union_parents(u)) {
                if (p == u) continue;
                if (const auto& pv = vector_of(p)) parents.push_back(*pv);
            }
            if (parents.size() < 2) continue;
            const DriftValues v = compute_drift(*ev, parents, options.threshold);
            DriftRecord r;
            r.entity = s.entity;
            r.parent_cnt = v.n;
            r.min_depth = s.min_depth;
            r.segment = s.segment;
            r.drift_raw = v.drift_raw;
            r.drift_adj = v.drift_adj;
            r.flagged = v.flagged;
            computed[i] = r;
        }
    });
    for (std::size_t i = 0; i < screened.size(); ++i) {
        if (computed[i]) {
            out.records.push_back(*computed[i]);
        } else {
            out.skipped.push_back(screened[i].entity);
        }
    }
    std::sort(out.skipped.begin(), out.skipped.end());
    return out;
}

}  // namespace

DriftScanResult scan_drift(const TaxonomyGraph& clean, const TextIndex& texts, Embedder& embedder,
                           const DriftScanOptions& options) {
    auto screening = screen(clean);
    return scan_records(clean, texts, embedder, std::move(screening.records), screening.discarded, {}, options);
}

DriftScanResult scan_drift(const TaxonomyGraph& clean, const TextIndex& texts, Embedder& embedder,
                           std::span<const EntityId> entities, const DriftScanOptions& options) {
    auto screening = screen(clean);
    std::vector<EntityId> wanted(entities.begin(), entities.end());
    std::sort(wanted.begin(), wanted.end());
    wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
    std::vector<ScreeningRecord> kept;
    std::vector<EntityId> skipped;
    for (EntityId e : wanted) {
        auto it = std::lower_bound(screening.records.begin(), screening.records.end(), e,
                                   [](const ScreeningRecord& r, EntityId id) { return r.entity < id; });
        if (it != screening.records.end() && it->entity == e) {
            kept.push_back(*it);
        } else {
            skipped.push_back(e);
        }
    }
    return scan_records(clean, texts, embedder, std::move(kept), 0, std::move(skipped), options);
}

double nearest_rank_p90(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    // ceil(0.9 * n) in integers, 1-based.
    const std::size_t rank = (9 * values.size() + 9) / 10;
    return values[std::max<std::size_t>(rank, 1) - 1];
}

std::vector<RootAggregate> aggregate_by_root(std::span<const RootKeyedDrift> items) {
    struct Acc {
        std::vector<double> values;
        std::size_t flagged = 0;
    };
    std::map<EntityId, Acc> by_root;
    for (const auto& it : items) {
        auto& acc = by_root[it.root];
        acc.values.push_back(it.drift_adj);
        if (it.flagged) ++acc.flagged;
    }
    std::vector<RootAggregate> out;
    out.reserve(by_root.size());
    for (auto& [root, acc] : by_root) {
        RootAggregate a;
        a.root = root;
        a.cnt = acc.values.size();
        double sum = 0.0;
        for (double v : acc.values) sum += v;
        a.avg_drift = sum / static_cast<double>(a.cnt);
        a.high_ratio = static_cast<double>(acc.flagged) / static_cast<double>(a.cnt);
        a.p90 = nearest_rank_p90(std::move(acc.values));
        out.push_back(a);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const RootAggregate& a, const RootAggregate& b) { return a.cnt > b.cnt; });
    return out;
}

std::vector<RootAggregate> aggregate_by_root(std::span<const DriftRecord> records, const TaxonomyGraph& clean,
                                             const RootAssignment& roots) {
    std::vector<RootKeyedDrift> items;
    items.reserve(records.size());
    for (const auto& r : records) items.push_back({roots.root(clean, r.entity), r.drift_adj, r.flagged});
    return aggregate_by_root(items);
}

std::string_view parent_group_name(ParentGroup g) noexcept {
    switch (g) {
        case ParentGroup::UpTo2: return "<=2";
        case ParentGroup::From3To6: return "3-6";
        case ParentGroup::Over6: return ">6";
    }
    return "<=2";
}

ParentGroup parent_group_of(std::size_t parent_cnt) noexcept {
    if (parent_cnt <= 2) return ParentGroup::UpTo2;
    if (parent_cnt <= 6) return ParentGroup::From3To6;
    return ParentGroup::Over6;
}

std::span<const DriftBin> drift_bins() noexcept {
    static constexpr DriftBin kBins[kDriftBinCount] = {
        {0.0, 0.2}, {0.2, 0.4}, {0.4, 0.6}, {0.6, 1.0}, {1.0, 1.5}, {1.5, std::numeric_limits<double>::infinity()}};
    return kBins;
}

std::size_t drift_bin_of(double drift_adj) noexcept {
    const auto bins = drift_bins();
    for (std::size_t i = 0; i + 1 < bins.size(); ++i) {
        if (drift_adj < bins[i].hi) return i;
    }
    return bins.size() - 1;
}

std::size_t Heatmap::total() const noexcept {
    std::size_t t = 0;
    for (const auto& row : counts) {
        for (std::size_t c : row) t += c;
    }
    return t;
}

Heatmap heatmap(std::span<const DriftRecord> records) {
    Heatmap h;
    for (const auto& r : records) ++h.counts[static_cast<int>(parent_group_of(r.parent_cnt))][drift_bin_of(r.drift_adj)];
    return h;
}

}  // namespace taxolint
