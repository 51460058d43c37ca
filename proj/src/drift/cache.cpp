// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors

#include <cstring>
#include <fstream>
#include <mutex>

#include <openssl/sha.h>

#include "taxolint/drift.hpp"
#include "taxolint/error.hpp"

namespace taxolint {

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', 'C'};

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

std::uint32_t get_u32(const unsigned char* p) {
    return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 | std::uint32_t{p[3]} << 24;
}

std::string encode_record(const CacheKey& key, const Embedding& value) {
    std::string out(reinterpret_cast<const char*>(key.data()), key.size());
    for (float f : value) {
        std::uint32_t bits;
        std::memcpy(&bits, &f, sizeof bits);
        put_u32(out, bits);
    }
    return out;
}

}  // namespace

CacheKey embedding_cache_key(std::string_view identity, std::string_view text) {
    // identity and text are joined with a NUL, which neither contains.
    std::string buf;
    buf.reserve(identity.size() + 1 + text.size());
    buf.append(identity).push_back('\0');
    buf.append(text);
    CacheKey key;
    SHA256(reinterpret_cast<const unsigned char*>(buf.data()), buf.size(), key.data());
    return key;
}

std::size_t EmbeddingCache::KeyHash::operator()(const CacheKey& k) const noexcept {
    std::size_t h;
    std::memcpy(&h, k.data(), sizeof h);
    return h;
}

EmbeddingCache::EmbeddingCache(std::size_t dimension) : dimension_(dimension) {}

EmbeddingCache::EmbeddingCache(std::filesystem::path path, std::size_t dimension)
    : dimension_(dimension), path_(std::move(path)) {
    std::error_code ec;
    if (!std::filesystem::exists(*path_, ec)) {
        if (path_->has_parent_path()) std::filesystem::create_directories(path_->parent_path(), ec);
        std::ofstream out(*path_, std::ios::binary);
        if (!out) throw InputUnreadable("cannot create embedding cache " + path_->string());
        std::string header(kMagic, 4);
        put_u32(header, static_cast<std::uint32_t>(dimension_));
        out.write(header.data(), static_cast<std::streamsize>(header.size()));
        return;
    }

    std::ifstream in(*path_, std::ios::binary);
    if (!in) throw InputUnreadable("cannot read embedding cache " + path_->string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
    if (data.size() < 8 || std::memcmp(data.data(), kMagic, 4) != 0)
        throw CacheCorrupt(path_->string() + " is not an embedding cache");
    if (get_u32(bytes + 4) != dimension_)
        throw CacheCorrupt(path_->string() + " holds dimension " + std::to_string(get_u32(bytes + 4)) +
                           ", expected " + std::to_string(dimension_));

    const std::size_t record = 32 + 4 * dimension_;
    std::size_t pos = 8;
    for (; pos + record <= data.size(); pos += record) {
        CacheKey key;
        std::memcpy(key.data(), bytes + pos, 32);
        Embedding v(dimension_);
        for (std::size_t i = 0; i < dimension_; ++i) {
            std::uint32_t bits = get_u32(bytes + pos + 32 + 4 * i);
            std::memcpy(&v[i], &bits, sizeof bits);
        }
        entries_.emplace(key, std::move(v));
    }
    // A crash mid-append leaves a partial record; drop it so appends stay aligned.
    if (pos != data.size()) std::filesystem::resize_file(*path_, pos);
}

std::optional<Embedding> EmbeddingCache::get(const CacheKey& key) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void EmbeddingCache::put(const CacheKey& key, const Embedding& value) {
    if (value.size() != dimension_)
        throw CacheCorrupt("embedding of dimension " + std::to_string(value.size()) + " does not fit cache dimension " +
                           std::to_string(dimension_));
    std::unique_lock lock(mutex_);
    if (!entries_.emplace(key, value).second) return;
    if (!path_) return;
    if (!appender_.is_open()) appender_.open(*path_, std::ios::binary | std::ios::app);
    const std::string rec = encode_record(key, value);
    appender_.write(rec.data(), static_cast<std::streamsize>(rec.size()));
    appender_.flush();
    if (!appender_) throw InputUnreadable("cannot append to embedding cache " + path_->string());
}

std::size_t EmbeddingCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

}  // namespace taxolint
