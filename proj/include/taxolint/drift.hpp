// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors
#pragma once
// Semantic drift: how far an entity's text embedding sits from the centroid
// of its parents' embeddings.
//
//   p_mean    = (1/n) * sum(p_i)
//   drift_raw = 1 - cos(e, p_mean)        (1 when p_mean is the zero vector)
//   drift_adj = drift_raw * ln(n + 1)
//
// An entity is flagged when drift_adj >= threshold.

#include <array>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "taxolint/entity.hpp"
#include "taxolint/graph.hpp"
#include "taxolint/ingest.hpp"

namespace taxolint {

using Embedding = std::vector<float>;

inline constexpr double kDefaultDriftThreshold = 0.60;

// ---------------------------------------------------------------------------
// Screening

enum class Segment { A, C, E, Other };
std::string_view segment_name(Segment s) noexcept;
Segment parse_segment(std::string_view s);  // throws MalformedLine
Segment classify_segment(std::size_t parent_cnt, HopCount min_depth) noexcept;

struct ScreeningRecord {
    EntityId entity;
    std::size_t parent_cnt = 0;
    HopCount min_depth = kUnreached;  // kUnreached when no pseudo-root is below it
    Segment segment = Segment::Other;
};

struct ScreeningResult {
    std::vector<ScreeningRecord> records;  // ascending entity
    std::size_t discarded = 0;             // fewer than two distinct parents
};

// Pseudo-roots are nodes without outgoing edges; min_depth is the hop count
// from the entity down to the nearest one.
ScreeningResult screen(const TaxonomyGraph& clean);

// ---------------------------------------------------------------------------
// Embedding providers

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::size_t dimension() const = 0;
    // Provider name plus model identifier; part of the cache key.
    virtual std::string identity() const = 0;
    // One unit vector per input. Throws ProviderUnavailable.
    virtual std::vector<Embedding> embed_batch(std::span<const std::string> texts) = 0;
};

// Deterministic bag-of-tokens provider: each lowercase token seeds a
// pseudo-random unit vector; the text vector is their normalized sum.
class OfflineProvider final : public EmbeddingProvider {
public:
    explicit OfflineProvider(std::size_t dimension = 768, std::uint64_t seed = 0);

    std::size_t dimension() const override { return dimension_; }
    std::string identity() const override;
    std::vector<Embedding> embed_batch(std::span<const std::string> texts) override;

    Embedding embed(std::string_view text) const;

private:
    std::size_t dimension_;
    std::uint64_t seed_;
};

struct RemoteProviderOptions {
    std::string endpoint = "http://127.0.0.1:8090";
    std::string model = "sentence-transformers/all-mpnet-base-v2";
    std::size_t dimension = 768;
    std::size_t batch_size = 64;
    int timeout_seconds = 60;
};

// POST {endpoint}/embed {"texts":[...]} -> {"vectors":[[...], ...]}.
class RemoteProvider final : public EmbeddingProvider {
public:
    explicit RemoteProvider(RemoteProviderOptions options);

    std::size_t dimension() const override { return options_.dimension; }
    std::string identity() const override { return "remote:" + options_.model; }
    std::vector<Embedding> embed_batch(std::span<const std::string> texts) override;

private:
    RemoteProviderOptions options_;
};

// ---------------------------------------------------------------------------
// Persistent cache
//
// File layout: "EMBC", u32 LE dimension, then records of
// (32-byte SHA-256 key, dimension x f32 LE). A truncated trailing record is
// dropped on open.

using CacheKey = std::array<std::uint8_t, 32>;
CacheKey embedding_cache_key(std::string_view identity, std::string_view text);

class EmbeddingCache {
public:
    // In-memory only.
    explicit EmbeddingCache(std::size_t dimension);
    // Loads or creates `path`. Throws CacheCorrupt on a bad header or
    // dimension mismatch, InputUnreadable when the file cannot be opened.
    EmbeddingCache(std::filesystem::path path, std::size_t dimension);

    std::optional<Embedding> get(const CacheKey& key) const;
    // Appends unless the key is already present.
    void put(const CacheKey& key, const Embedding& value);
    std::size_t size() const;
    std::size_t dimension() const noexcept { return dimension_; }

private:
    struct KeyHash {
        std::size_t operator()(const CacheKey& k) const noexcept;
    };

    std::size_t dimension_;
    std::optional<std::filesystem::path> path_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<CacheKey, Embedding, KeyHash> entries_;
    std::ofstream appender_;
};

// label + ". " + description, dropping empty parts and the separator.
std::string compose_text(const EntityText& text);
std::string compose_text(std::string_view label, std::string_view description);

// Provider front end with caching. Safe for concurrent use when the provider is.
class Embedder {
public:
    Embedder(EmbeddingProvider& provider, EmbeddingCache& cache) : provider_(provider), cache_(cache) {}

    // Throws EmptyText when the composed text is empty.
    Embedding embed(const EntityText& text);
    // Embeds non-empty texts; missing entries come back nullopt.
    std::vector<std::optional<Embedding>> embed_many(std::span<const std::string> texts);

    EmbeddingProvider& provider() noexcept { return provider_; }
    std::size_t provider_calls() const noexcept { return provider_calls_; }

private:
    EmbeddingProvider& provider_;
    EmbeddingCache& cache_;
    std::atomic<std::size_t> provider_calls_{0};
};

// ---------------------------------------------------------------------------
// Drift

double cosine_similarity(std::span<const float> a, std::span<const float> b);
// Componentwise mean. Throws TooFewParents when fewer than two vectors.
std::vector<double> mean_parent_embedding(std::span<const Embedding> parents);

struct DriftValues {
    std::size_t n = 0;
    double drift_raw = 0.0;
    double drift_adj = 0.0;
    bool flagged = false;
};
DriftValues compute_drift(std::span<const float> entity, std::span<const Embedding> parents,
                          double threshold = kDefaultDriftThreshold);

struct DriftRecord {
    EntityId entity;
    std::size_t parent_cnt = 0;  // parents whose embeddings were used (n)
    HopCount min_depth = kUnreached;
    Segment segment = Segment::Other;
    double drift_raw = 0.0;
    double drift_adj = 0.0;
    bool flagged = false;
};

struct DriftScanOptions {
    double threshold = kDefaultDriftThreshold;
    std::string language = "en";
    unsigned jobs = 1;
};

struct DriftScanResult {
    std::vector<DriftRecord> records;  // ascending entity
    std::size_t discarded = 0;         // from screening
    std::vector<EntityId> skipped;     // no text, or fewer than two embeddable parents
};

DriftScanResult scan_drift(const TaxonomyGraph& clean, const TextIndex& texts, Embedder& embedder,
                           const DriftScanOptions& options = {});
// Restricts the scan to `entities` (still screened; non-screened ids are skipped).
DriftScanResult scan_drift(const TaxonomyGraph& clean, const TextIndex& texts, Embedder& embedder,
                           std::span<const EntityId> entities, const DriftScanOptions& options = {});

// ---------------------------------------------------------------------------
// Roots and aggregation

// Assigned to entities no pseudo-root reaches (cycle-only components).
inline constexpr EntityId kUnrootedComponent{};
// "Q<n>", or "unrooted" for the sentinel.
std::string root_label(EntityId root);
std::optional<EntityId> parse_root_label(std::string_view text);

struct RootAssignment {
    std::vector<EntityId> root_of;  // by node index
    std::vector<HopCount> distance;
    EntityId root(const TaxonomyGraph& g, EntityId e) const { return root_of[g.index_of(e)]; }
};

// Nearest pseudo-root along reverse edges; ties go to the smallest root id.
RootAssignment assign_pseudo_roots(const TaxonomyGraph& clean);

struct RootAggregate {
    EntityId root;
    std::size_t cnt = 0;
    double avg_drift = 0.0;
    double p90 = 0.0;
    double high_ratio = 0.0;
};

// Nearest-rank percentile on ascending values: element ceil(q * n), 1-based.
double nearest_rank_p90(std::vector<double> values);

struct RootKeyedDrift {
    EntityId root;
    double drift_adj = 0.0;
    bool flagged = false;
};
// Sorted by cnt descending, then root ascending.
std::vector<RootAggregate> aggregate_by_root(std::span<const RootKeyedDrift> items);
std::vector<RootAggregate> aggregate_by_root(std::span<const DriftRecord> records, const TaxonomyGraph& clean,
                                             const RootAssignment& roots);

// ---------------------------------------------------------------------------
// Heatmap

enum class ParentGroup { UpTo2, From3To6, Over6 };
std::string_view parent_group_name(ParentGroup g) noexcept;  // "<=2", "3-6", ">6"
ParentGroup parent_group_of(std::size_t parent_cnt) noexcept;

struct DriftBin {
    double lo;
    double hi;  // +infinity for the last bin
};
inline constexpr std::size_t kDriftBinCount = 6;
std::span<const DriftBin> drift_bins() noexcept;
std::size_t drift_bin_of(double drift_adj) noexcept;

struct Heatmap {
    std::array<std::array<std::size_t, kDriftBinCount>, 3> counts{};
    std::size_t total() const noexcept;
};
Heatmap heatmap(std::span<const DriftRecord> records);

}  // namespace taxolint
