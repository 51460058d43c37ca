// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors

#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "taxolint/error.hpp"
#include "taxolint/server.hpp"

namespace taxolint {

using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kStateNames[] = {"queued", "running", "done", "failed"};

JobState parse_state(const std::string& s) {
    for (int i = 0; i < 4; ++i)
        if (s == kStateNames[i]) return static_cast<JobState>(i);
    throw MalformedLine("unknown job state '" + s + "'");
}

std::string new_job_id() {
    static std::mutex m;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lock(m);
    std::ostringstream out;
    out << "j" << std::hex << (rng() & 0xffffffffffffULL);
    return out.str();
}

bool finished(JobState s) { return s == JobState::Done || s == JobState::Failed; }

}  // namespace

std::string_view job_state_name(JobState s) noexcept { return kStateNames[static_cast<int>(s)]; }

std::string job_to_json(const JobRecord& r) {
    ojson doc;
    doc["api"] = kApiVersion;
    doc["id"] = r.id;
    doc["state"] = job_state_name(r.state);
    doc["progress"] = r.progress;
    ojson spec;
    spec["entities"] = ojson::array();
    for (auto e : r.spec.entities) spec["entities"].push_back(e.str());
    spec["component"] = r.spec.component ? ojson(r.spec.component->str()) : ojson(nullptr);
    spec["stages"] = r.spec.stages;
    doc["spec"] = std::move(spec);
    doc["results"] = ojson::object();
    for (const auto& [stage, path] : r.results) doc["results"][stage] = path;
    doc["error"] = r.error.empty() ? ojson(nullptr) : ojson(r.error);
    return doc.dump();
}

JobRecord job_from_json(std::string_view text) {
    try {
        auto doc = ojson::parse(text);
        JobRecord r;
        r.id = doc.at("id").get<std::string>();
        r.state = parse_state(doc.at("state").get<std::string>());
        r.progress = doc.at("progress").get<double>();
        const auto& spec = doc.at("spec");
        for (const auto& e : spec.at("entities")) r.spec.entities.push_back(EntityId::from_string(e.get<std::string>()));
        if (!spec.at("component").is_null())
            r.spec.component = EntityId::from_string(spec.at("component").get<std::string>());
        r.spec.stages = spec.at("stages").get<std::vector<std::string>>();
        for (const auto& [stage, path] : doc.at("results").items()) r.results[stage] = path.get<std::string>();
        if (!doc.at("error").is_null()) r.error = doc.at("error").get<std::string>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedLine(std::string("bad job record: ") + e.what());
    }
}

JobRunner::JobRunner(std::filesystem::path dir, unsigned workers, std::size_t capacity, Executor executor)
    : dir_(std::move(dir)), capacity_(capacity), executor_(std::move(executor)) {
    std::filesystem::create_directories(dir_);
    load_existing();
    for (unsigned i = 0; i < std::max(1u, workers); ++i) workers_.emplace_back([this] { worker_loop(); });
}

JobRunner::~JobRunner() {
    {
        std::lock_guard lock(mutex_);
        stopping_ = true;
    }
    changed_.notify_all();
    for (auto& t : workers_) t.join();
}

void JobRunner::load_existing() {
    for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        JobRecord r;
        try {
            r = job_from_json(ss.str());
        } catch (const Error&) {
            continue;  // unreadable record: leave it alone
        }
        if (!finished(r.state)) {
            r.state = JobState::Failed;
            r.error = "interrupted: the server stopped before the job finished";
            persist(r);
        }
        jobs_.emplace(r.id, std::move(r));
    }
}

void JobRunner::persist(const JobRecord& r) const { write_file_atomic(dir_ / (r.id + ".json"), job_to_json(r)); }

std::optional<std::string> JobRunner::submit(ScanSpec spec) {
    std::lock_guard lock(mutex_);
    if (active_ >= capacity_) return std::nullopt;
    JobRecord r;
    do {
        r.id = new_job_id();
    } while (jobs_.count(r.id));
    r.spec = std::move(spec);
    persist(r);
    const auto id = r.id;
    jobs_.emplace(id, std::move(r));
    queue_.push_back(id);
    ++active_;
    changed_.notify_all();
    return id;
}

std::optional<JobRecord> JobRunner::get(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = jobs_.find(id);
    if (it == jobs_.end()) return std::nullopt;
    return it->second;
}

std::optional<JobRecord> JobRunner::wait(const std::string& id, std::chrono::milliseconds timeout) const {
    std::unique_lock lock(mutex_);
    changed_.wait_for(lock, timeout, [&] {
        auto it = jobs_.find(id);
        return it == jobs_.end() || finished(it->second.state);
    });
    auto it = jobs_.find(id);
    if (it == jobs_.end()) return std::nullopt;
    return it->second;
}

void JobRunner::hold(bool on) {
    {
        std::lock_guard lock(mutex_);
        held_ = on;
    }
    changed_.notify_all();
}

void JobRunner::worker_loop() {
    while (true) {
        std::string id;
        ScanSpec spec;
        {
            std::unique_lock lock(mutex_);
            changed_.wait(lock, [&] { return stopping_ || (!held_ && !queue_.empty()); });
            if (stopping_) return;
            id = queue_.front();
            queue_.pop_front();
            auto& r = jobs_.at(id);
            r.state = JobState::Running;
            spec = r.spec;
            persist(r);
        }
        changed_.notify_all();

        auto progress = [&](double p) {
            std::lock_guard lock(mutex_);
            jobs_.at(id).progress = std::clamp(p, 0.0, 1.0);
        };
        std::map<std::string, std::string> results;
        std::string error;
        bool ok = true;
        try {
            results = executor_(id, spec, progress);
        } catch (const Error& e) {
            ok = false;
            error = e.code() + ": " + e.what();
        } catch (const std::exception& e) {
            ok = false;
            error = e.what();
        }
        {
            std::lock_guard lock(mutex_);
            auto& r = jobs_.at(id);
            r.state = ok ? JobState::Done : JobState::Failed;
            if (ok) r.progress = 1.0;
            r.results = std::move(results);
            r.error = std::move(error);
            --active_;
            persist(r);
        }
        changed_.notify_all();
    }
}

}  // namespace taxolint
