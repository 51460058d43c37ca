// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors

#include "taxolint/wikidata_client.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "taxolint/error.hpp"

namespace taxolint {

using json = nlohmann::json;

namespace {

std::string utc_today() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[16];
    std::strftime(buf, sizeof buf, "%Y-%m-%d", &tm);
    return buf;
}

struct SplitUrl {
    std::string scheme_host_port;
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw InvalidConfig("endpoint must include a scheme: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

bool offline_from_env() {
    const char* v = std::getenv("TAXOLINT_OFFLINE");
    return v != nullptr && std::string(v) == "1";
}

WikidataClient::WikidataClient(WikidataClientOptions options) : options_(std::move(options)) {
    if (!options_.today) options_.today = utc_today;
}

std::size_t WikidataClient::network_calls() const {
    std::lock_guard lock(mutex_);
    return network_calls_;
}

std::string WikidataClient::request(EntityId qid) {
    if (options_.offline) throw NetworkError("network disabled (TAXOLINT_OFFLINE=1)");

    {
        std::unique_lock lock(mutex_);
        if (has_requested_) {
            auto next = last_request_ + options_.min_interval;
            auto now = std::chrono::steady_clock::now();
            if (next > now) {
                lock.unlock();
                std::this_thread::sleep_for(next - now);
                lock.lock();
            }
        }
        last_request_ = std::chrono::steady_clock::now();
        has_requested_ = true;
        ++network_calls_;
    }

    SplitUrl url = split_url(options_.endpoint);
    httplib::Client client(url.scheme_host_port);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    client.set_follow_location(true);
    client.set_default_headers({{"User-Agent", "taxolint/1.0 (taxonomy consistency checker)"}});

    std::string target = url.path + "?action=wbgetentities&ids=" + qid.str() +
                         "&props=claims|labels|descriptions&format=json";
    auto res = client.Get(target);
    if (!res) throw NetworkError("request for " + qid.str() + " failed: " + httplib::to_string(res.error()));
    if (res->status == 429) throw RateLimited("endpoint rate limited request for " + qid.str());
    if (res->status != 200)
        throw NetworkError("request for " + qid.str() + " returned HTTP " + std::to_string(res->status));
    return res->body;
}

DumpEntity WikidataClient::fetch(EntityId qid) {
    std::filesystem::path cached;
    if (!options_.cache_dir.empty()) {
        cached = options_.cache_dir / options_.today() / (qid.str() + ".json");
        std::ifstream in(cached, std::ios::binary);
        if (in) {
            std::stringstream ss;
            ss << in.rdbuf();
            return decode_wbgetentities(ss.str(), qid, options_.language);
        }
    }

    std::string body = request(qid);
    DumpEntity entity = decode_wbgetentities(body, qid, options_.language);

    if (!cached.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(cached.parent_path(), ec);
        auto tmp = cached;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary);
            out << body;
        }
        std::filesystem::rename(tmp, cached, ec);
    }
    return entity;
}

DumpEntity decode_wbgetentities(const std::string& body, EntityId qid, std::string_view language) {
    json doc = json::parse(body, nullptr, false);
    if (!doc.is_object()) throw NetworkError("wbgetentities response is not JSON");
    if (auto err = doc.find("error"); err != doc.end()) {
        std::string code = err->is_object() ? err->value("code", "") : "";
        if (code == "no-such-entity") throw UnknownQid(qid.str() + " does not exist");
        throw NetworkError("wbgetentities error: " + code);
    }
    auto entities = doc.find("entities");
    if (entities == doc.end() || !entities->is_object()) throw NetworkError("wbgetentities response has no entities");
    auto entity = entities->find(qid.str());
    if (entity == entities->end()) throw UnknownQid(qid.str() + " missing from response");
    if (entity->contains("missing")) throw UnknownQid(qid.str() + " does not exist");
    json item = *entity;
    if (!item.contains("type")) item["type"] = "item";
    try {
        return parse_dump_line(item.dump(), language);
    } catch (const MalformedLine& e) {
        throw NetworkError(std::string("unexpected entity document: ") + e.what());
    }
}

DumpEntity fetch_entity_live(EntityId qid, const std::string& endpoint) {
    WikidataClientOptions options;
    options.endpoint = endpoint;
    WikidataClient client(std::move(options));
    return client.fetch(qid);
}

}  // namespace taxolint
