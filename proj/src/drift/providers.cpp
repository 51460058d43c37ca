// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors

#include <algorithm>
#include <cctype>
#include <cmath>

#include <httplib.h>
#include <json.hpp>

#include "taxolint/drift.hpp"
#include "taxolint/error.hpp"

namespace taxolint {

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Lowercased runs of ASCII alphanumerics; non-ASCII bytes stay inside tokens
// so UTF-8 words survive intact.
std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (unsigned char c : text) {
        if (c >= 0x80 || std::isalnum(c)) {
            cur += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

void normalize(std::vector<double>& v) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return;
    for (double& x : v) x /= norm;
}

Embedding to_float(const std::vector<double>& v) { return Embedding(v.begin(), v.end()); }

}  // namespace

OfflineProvider::OfflineProvider(std::size_t dimension, std::uint64_t seed) : dimension_(dimension), seed_(seed) {
    if (dimension == 0) throw InvalidConfig("embedding dimension must be positive");
}

std::string OfflineProvider::identity() const {
    return "offline:token-hash-v1:d" + std::to_string(dimension_) + ":s" + std::to_string(seed_);
}

Embedding OfflineProvider::embed(std::string_view text) const {
    auto tokens = tokenize(text);
    if (tokens.empty()) tokens.emplace_back(text);
    std::vector<double> sum(dimension_, 0.0);
    std::vector<double> tv(dimension_);
    for (const auto& token : tokens) {
        std::uint64_t state = fnv1a(token) ^ seed_;
        for (double& x : tv) x = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53 * 2.0 - 1.0;
        normalize(tv);
        for (std::size_t i = 0; i < dimension_; ++i) sum[i] += tv[i];
    }
    normalize(sum);
    // Keep the unit-norm contract even if token vectors cancel.
    if (std::all_of(sum.begin(), sum.end(), [](double x) { return x == 0.0; })) sum[0] = 1.0;
    return to_float(sum);
}

std::vector<Embedding> OfflineProvider::embed_batch(std::span<const std::string> texts) {
    std::vector<Embedding> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed(t));
    return out;
}

RemoteProvider::RemoteProvider(RemoteProviderOptions options) : options_(std::move(options)) {
    if (options_.dimension == 0) throw InvalidConfig("embedding dimension must be positive");
    if (options_.batch_size == 0) options_.batch_size = 1;
    while (!options_.endpoint.empty() && options_.endpoint.back() == '/') options_.endpoint.pop_back();
}

std::vector<Embedding> RemoteProvider::embed_batch(std::span<const std::string> texts) {
    // Split "scheme://host:port/prefix" into the client base and a path prefix.
    const auto& ep = options_.endpoint;
    const auto scheme_end = ep.find("://");
    const auto path_start = ep.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    const std::string base = ep.substr(0, path_start);
    const std::string prefix = path_start == std::string::npos ? "" : ep.substr(path_start);

    httplib::Client client(base);
    client.set_connection_timeout(options_.timeout_seconds, 0);
    client.set_read_timeout(options_.timeout_seconds, 0);
    client.set_write_timeout(options_.timeout_seconds, 0);

    std::vector<Embedding> out;
    out.reserve(texts.size());
    for (std::size_t begin = 0; begin < texts.size(); begin += options_.batch_size) {
        const std::size_t end = std::min(texts.size(), begin + options_.batch_size);
        nlohmann::json body;
        body["texts"] = nlohmann::json::array();
        for (std::size_t i = begin; i < end; ++i) body["texts"].push_back(texts[i]);
        if (!options_.model.empty()) body["model"] = options_.model;

        auto res = client.Post(prefix + "/embed", body.dump(), "application/json");
        if (!res) throw ProviderUnavailable("embedding service " + ep + ": " + httplib::to_string(res.error()));
        if (res->status != 200)
            throw ProviderUnavailable("embedding service " + ep + " answered HTTP " + std::to_string(res->status));
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
            throw ProviderUnavailable(std::string("embedding service sent invalid JSON: ") + e.what());
        }
        if (!doc.contains("vectors") || !doc["vectors"].is_array() || doc["vectors"].size() != end - begin)
            throw ProviderUnavailable("embedding service response has the wrong number of vectors");
        for (const auto& row : doc["vectors"]) {
            if (!row.is_array() || row.size() != options_.dimension)
                throw ProviderUnavailable("embedding service returned dimension " + std::to_string(row.size()) +
                                          ", expected " + std::to_string(options_.dimension));
            std::vector<double> v;
            v.reserve(row.size());
            for (const auto& x : row) {
                if (!x.is_number()) throw ProviderUnavailable("embedding service returned a non-numeric component");
                v.push_back(x.get<double>());
            }
            normalize(v);
            out.push_back(to_float(v));
        }
    }
    return out;
}

}  // namespace taxolint
