// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors
#pragma once
// Read-only HTTP API over a pipeline output directory, plus background scan
// jobs. Every JSON body carries "api": 1; errors use
// {"api": 1, "error": {"code": ..., "message": ...}}.

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "taxolint/locale.hpp"
#include "taxolint/pipeline.hpp"
#include "taxolint/wikidata_client.hpp"

namespace taxolint {

inline constexpr int kApiVersion = 1;

// Provider, cache and embedder for one snapshot. The cache is in memory.
struct EmbeddingContext {
    std::unique_ptr<EmbeddingProvider> provider;
    std::unique_ptr<EmbeddingCache> cache;
    std::unique_ptr<Embedder> embedder;
};

// Everything loaded from a data directory. Immutable once built; the server
// swaps whole snapshots.
struct AnalysisSnapshot {
    std::filesystem::path dir;
    PipelineConfig config;
    MetaclassPolicy policy;
    TaxonomyGraph graph;
    TaxonomyGraph clean;
    TextIndex texts;
    std::unordered_map<EntityId, RiskReport> risk;
    std::unordered_map<EntityId, DriftRecord> drift;
    std::unordered_map<EntityId, std::vector<FlagRow>> flags;
    std::size_t flag_count = 0;
    std::optional<std::vector<RootAggregate>> roots;
    std::optional<Heatmap> heatmap;
    // Null when the configured root is absent from the graph.
    std::unique_ptr<RiskScorer> scorer;
    std::shared_ptr<EmbeddingContext> embeddings;

    // Requires triples.tsv (MissingArtifact); every other artifact is
    // optional. Reads pipeline.conf when present.
    static std::shared_ptr<const AnalysisSnapshot> load(const std::filesystem::path& dir);
    // Builds from an in-memory graph (tests, live views).
    static std::shared_ptr<AnalysisSnapshot> from_graph(TaxonomyGraph graph, PipelineConfig config);
};

// ---------------------------------------------------------------------------
// Scan jobs

enum class JobState { Queued, Running, Done, Failed };
std::string_view job_state_name(JobState s) noexcept;

struct ScanSpec {
    std::vector<EntityId> entities;
    std::optional<EntityId> component;  // every member of this entity's component
    std::vector<std::string> stages;    // subset of {"cme", "risk", "drift"}
};

struct JobRecord {
    std::string id;
    ScanSpec spec;
    JobState state = JobState::Queued;
    double progress = 0.0;
    std::map<std::string, std::string> results;  // stage -> CSV path
    std::string error;
};

// Fixed worker pool with a bounded queue. Each record is persisted as
// <dir>/<id>.json on every transition; records left queued or running by a
// previous process are marked failed on startup.
class JobRunner {
public:
    // Runs a job; reports progress in [0, 1] and returns stage -> result path.
    using Executor = std::function<std::map<std::string, std::string>(
        const std::string& id, const ScanSpec& spec, const std::function<void(double)>& progress)>;

    JobRunner(std::filesystem::path dir, unsigned workers, std::size_t capacity, Executor executor);
    ~JobRunner();
    JobRunner(const JobRunner&) = delete;
    JobRunner& operator=(const JobRunner&) = delete;

    // nullopt when queued + running jobs already reach the capacity.
    std::optional<std::string> submit(ScanSpec spec);
    std::optional<JobRecord> get(const std::string& id) const;
    // Blocks until the job is done or failed, or the timeout expires.
    std::optional<JobRecord> wait(const std::string& id, std::chrono::milliseconds timeout) const;

    // While held, workers do not start new jobs.
    void hold(bool on);

    const std::filesystem::path& dir() const noexcept { return dir_; }

private:
    void worker_loop();
    void persist(const JobRecord& r) const;
    void load_existing();

    std::filesystem::path dir_;
    std::size_t capacity_;
    Executor executor_;
    mutable std::mutex mutex_;
    mutable std::condition_variable changed_;
    std::unordered_map<std::string, JobRecord> jobs_;
    std::deque<std::string> queue_;
    std::size_t active_ = 0;  // queued + running
    bool held_ = false;
    bool stopping_ = false;
    std::vector<std::thread> workers_;
};

std::string job_to_json(const JobRecord& r);
JobRecord job_from_json(std::string_view text);

// ---------------------------------------------------------------------------
// Server

struct ServerOptions {
    std::filesystem::path data_dir;
    std::filesystem::path static_dir;  // served at "/" when set
    unsigned job_workers = 2;
    std::size_t job_capacity = 2;
    // Live fetch of entities absent from the snapshot; TAXOLINT_OFFLINE=1
    // (picked up by the client options) disables it too.
    bool live_fetch = true;
    WikidataClientOptions wikidata;
    const LocaleCatalogs* catalogs = nullptr;  // null: built-in catalogs
};

class ApiServer {
public:
    // Loads the snapshot from options.data_dir when it is set (throws
    // MissingArtifact); otherwise starts empty and answers 503.
    explicit ApiServer(ServerOptions options);
    ~ApiServer();
    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    void set_snapshot(std::shared_ptr<const AnalysisSnapshot> snapshot);
    void reload();  // from options.data_dir
    std::shared_ptr<const AnalysisSnapshot> snapshot() const;

    // Port 0 picks a free port. Returns the bound port, or -1 on failure.
    int bind(const std::string& host, int port);
    // Serves until stop(); bind() first.
    void listen();
    // bind + listen on a background thread; returns the port or -1.
    int start(const std::string& host = "127.0.0.1", int port = 0);
    void stop();

    JobRunner& jobs();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace taxolint
