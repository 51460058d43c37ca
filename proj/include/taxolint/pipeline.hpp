// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors
#pragma once
// Batch pipeline: configuration, CSV artifacts and the stage runners shared
// by the CLI and the server's scan jobs.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "taxolint/cme.hpp"
#include "taxolint/drift.hpp"
#include "taxolint/ingest.hpp"
#include "taxolint/parallel.hpp"
#include "taxolint/risk.hpp"

namespace taxolint {

// Artifact file names inside the output / data directory.
namespace artifact {
inline constexpr const char* kTriples = "triples.tsv";
inline constexpr const char* kTexts = "texts.tsv";
inline constexpr const char* kIngestReport = "ingest_report.json";
inline constexpr const char* kComponents = "components.csv";
inline constexpr const char* kFlags = "flags.csv";
inline constexpr const char* kPure = "pure_classes.json";
inline constexpr const char* kRisk = "risk.csv";
inline constexpr const char* kDrift = "drift.csv";
inline constexpr const char* kRoots = "roots.csv";
inline constexpr const char* kHeatmap = "heatmap.csv";
inline constexpr const char* kConfig = "pipeline.conf";
}  // namespace artifact

struct PipelineConfig {
    std::filesystem::path triples;
    std::filesystem::path dump;
    std::filesystem::path texts;
    std::filesystem::path policy;  // JSON; empty selects MetaclassPolicy::defaults()
    std::filesystem::path out_dir = "taxolint-out";
    std::string language = "en";

    std::size_t max_paths = 5;
    HopCount witness_depth = 10;

    RiskConfig risk;

    double drift_threshold = kDefaultDriftThreshold;
    std::filesystem::path embedding_cache;  // empty: <out_dir>/embeddings-d<dim>.bin
    std::string provider = "offline";       // "offline" | "remote"
    std::uint64_t offline_seed = 0;
    RemoteProviderOptions remote;  // remote.dimension also sizes the offline provider

    unsigned jobs = default_jobs();

    // Flat `key = value` document, '#' comments. Throws InputUnreadable or
    // InvalidConfig (unknown key, bad value).
    static PipelineConfig from_file(const std::filesystem::path& path);
    static PipelineConfig parse(std::string_view text);
    // Throws InvalidConfig.
    void set(std::string_view key, std::string_view value);
    // Every key, in a fixed order; parse(serialize()) reproduces the config.
    std::string serialize() const;

    std::filesystem::path artifact(const char* name) const { return out_dir / name; }
    std::filesystem::path cache_path() const;
};

// {"abstract_class_ids": ["Q.."], "technical_node_ids": ["Q.."]}
MetaclassPolicy load_policy(const std::filesystem::path& path);
MetaclassPolicy policy_for(const PipelineConfig& config);

// Writes to a sibling temporary file; commit() renames it over the target.
// An uncommitted file is removed on destruction.
class AtomicFile {
public:
    explicit AtomicFile(std::filesystem::path target);
    ~AtomicFile();
    AtomicFile(const AtomicFile&) = delete;
    AtomicFile& operator=(const AtomicFile&) = delete;

    std::ostream& stream() { return out_; }
    void commit();

private:
    std::filesystem::path target_;
    std::filesystem::path temp_;
    std::ofstream out_;
    bool committed_ = false;
};

void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);  // throws MalformedLine

// ---------------------------------------------------------------------------
// CSV artifacts

struct FlagRow {
    EntityId entity;
    std::string tag;
    std::string detail;
    friend bool operator==(const FlagRow&, const FlagRow&) = default;
};

void write_flags_csv(std::ostream& out, const std::vector<AntiPatternFlag>& flags);
std::vector<FlagRow> read_flags_csv(std::istream& in);

void write_components_csv(std::ostream& out, const TaxonomyGraph& g, const ComponentLabeling& labeling);

// Only counts, dimensions and aggregate survive the round trip.
void write_risk_csv(std::ostream& out, const std::vector<RiskReport>& reports);
std::vector<RiskReport> read_risk_csv(std::istream& in);

void write_drift_csv(std::ostream& out, const std::vector<DriftRecord>& records);
std::vector<DriftRecord> read_drift_csv(std::istream& in);

void write_roots_csv(std::ostream& out, const std::vector<RootAggregate>& roots);
std::vector<RootAggregate> read_roots_csv(std::istream& in);

void write_heatmap_csv(std::ostream& out, const Heatmap& h);
Heatmap read_heatmap_csv(std::istream& in);

// Loads an artifact with `reader`; throws MissingArtifact when absent.
template <typename Reader>
auto read_artifact(const std::filesystem::path& path, Reader&& reader) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifact("missing artifact " + path.string());
    return reader(in);
}

// ---------------------------------------------------------------------------
// Stages

struct IngestSummary {
    ParseReport triples;
    ParseReport dump;
    ParseReport texts;
    std::size_t nodes = 0;
    std::size_t p31_edges = 0;
    std::size_t p279_edges = 0;
    std::size_t text_rows = 0;

    std::size_t edges() const { return p31_edges + p279_edges; }
    std::string to_json() const;
};

// Reads triples and/or dump plus texts; writes canonical triples.tsv,
// texts.tsv and the ingest report. Throws InputUnreadable, InvalidConfig.
IngestSummary run_ingest(const PipelineConfig& config);

// Throws MissingArtifact when the ingest outputs are absent.
TaxonomyGraph load_graph(const std::filesystem::path& dir);
TextIndex load_texts(const std::filesystem::path& dir);

std::vector<AntiPatternFlag> run_cme(const PipelineConfig& config);
PureClassReport run_pure(const PipelineConfig& config);
std::vector<RiskReport> run_score(const PipelineConfig& config);

std::unique_ptr<EmbeddingProvider> make_provider(const PipelineConfig& config);
// `provider` overrides the configured one when non-null.
DriftScanResult run_drift(const PipelineConfig& config, EmbeddingProvider* provider = nullptr);
std::vector<RootAggregate> run_aggregate(const PipelineConfig& config);
Heatmap run_heatmap(const PipelineConfig& config);

// ingest, cme, pure, score, drift, aggregate, heatmap; also saves the
// effective configuration next to the artifacts.
void run_all(const PipelineConfig& config, EmbeddingProvider* provider = nullptr);

// Risk rows for `entities` (in the given order) over the cleaned graph.
std::vector<RiskReport> score_entities(const TaxonomyGraph& clean, const RiskConfig& config,
                                       std::span<const EntityId> entities, unsigned jobs);

// ---------------------------------------------------------------------------
// Exit codes

inline constexpr int kExitOk = 0;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitMissingArtifact = 3;
inline constexpr int kExitProvider = 4;
inline constexpr int kExitBind = 5;

int exit_code_for(const std::exception& e) noexcept;

}  // namespace taxolint
