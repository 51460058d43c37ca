// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors
#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <mutex>
#include <string>

#include "taxolint/entity.hpp"
#include "taxolint/ingest.hpp"

namespace taxolint {

// True when TAXOLINT_OFFLINE=1 is set.
bool offline_from_env();

struct WikidataClientOptions {
    std::string endpoint = "https://www.wikidata.org/w/api.php";
    std::string language = "en";
    // Responses are stored as <cache_dir>/<YYYY-MM-DD>/Q<n>.json; empty disables caching.
    std::filesystem::path cache_dir;
    std::chrono::milliseconds min_interval{1000};
    std::chrono::seconds timeout{20};
    bool offline = offline_from_env();
    // UTC date used in the cache key; injectable for tests.
    std::function<std::string()> today;
};

// wbgetentities client: one entity per request, rate limited, disk cached.
// Thread-safe.
class WikidataClient {
public:
    explicit WikidataClient(WikidataClientOptions options);

    // Throws NetworkError, UnknownQid, RateLimited (HTTP 429).
    DumpEntity fetch(EntityId qid);

    std::size_t network_calls() const;
    const WikidataClientOptions& options() const noexcept { return options_; }

private:
    std::string request(EntityId qid);

    WikidataClientOptions options_;
    mutable std::mutex mutex_;
    std::chrono::steady_clock::time_point last_request_{};
    bool has_requested_ = false;
    std::size_t network_calls_ = 0;
};

// Decodes a wbgetentities response body for `qid`. Throws UnknownQid or
// NetworkError (unexpected body).
DumpEntity decode_wbgetentities(const std::string& body, EntityId qid, std::string_view language);

// Convenience one-shot fetch without caching.
DumpEntity fetch_entity_live(EntityId qid, const std::string& endpoint);

}  // namespace taxolint
