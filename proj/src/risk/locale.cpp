// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors

#include "taxolint/locale.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "taxolint/error.hpp"

namespace taxolint {

// Generated from locales/*.json at configure time.
namespace generated {
extern const char* const kLocaleEn;
extern const char* const kLocaleZh;
extern const char* const kLocaleJa;
}  // namespace generated

namespace {

std::map<std::string, std::string> parse_table(std::string_view lang, const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfig("locale " + std::string(lang) + ": " + e.what());
    }
    if (!doc.is_object()) throw InvalidConfig("locale " + std::string(lang) + ": expected a JSON object");
    std::map<std::string, std::string> table;
    for (auto& [key, value] : doc.items()) {
        if (!value.is_string()) throw InvalidConfig("locale " + std::string(lang) + ": value of " + key + " is not a string");
        table.emplace(key, value.get<std::string>());
    }
    return table;
}

}  // namespace

const LocaleCatalogs& LocaleCatalogs::builtin() {
    static const LocaleCatalogs catalogs = from_json({{"en", generated::kLocaleEn},
                                                      {"zh", generated::kLocaleZh},
                                                      {"ja", generated::kLocaleJa}});
    return catalogs;
}

LocaleCatalogs LocaleCatalogs::load_directory(const std::filesystem::path& dir) {
    std::map<std::string, std::string> docs;
    for (std::string_view lang : kSupported) {
        auto path = dir / (std::string(lang) + ".json");
        std::ifstream in(path);
        if (!in) throw InputUnreadable("cannot read locale catalog " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        docs.emplace(lang, ss.str());
    }
    return from_json(docs);
}

LocaleCatalogs LocaleCatalogs::from_json(const std::map<std::string, std::string>& documents) {
    LocaleCatalogs out;
    for (const auto& [lang, text] : documents) out.tables_.emplace(lang, parse_table(lang, text));
    if (!out.tables_.count("en")) throw InvalidConfig("the English locale catalog is required");
    return out;
}

bool LocaleCatalogs::has_locale(std::string_view lang) const { return tables_.find(lang) != tables_.end(); }

const std::map<std::string, std::string>& LocaleCatalogs::table(std::string_view lang) const {
    auto it = tables_.find(lang);
    if (it == tables_.end()) it = tables_.find(std::string_view("en"));
    return it->second;
}

const std::string& LocaleCatalogs::lookup(std::string_view lang, std::string_view key) const {
    const std::string k(key);
    const auto& t = table(lang);
    if (auto it = t.find(k); it != t.end()) return it->second;
    const auto& en = table("en");
    if (auto it = en.find(k); it != en.end()) return it->second;
    // Unknown keys render as themselves; keep the storage alive.
    static thread_local std::string fallback;
    fallback = k;
    return fallback;
}

std::string LocaleCatalogs::format(std::string_view lang, std::string_view key,
                                   const std::map<std::string, std::string>& params) const {
    const std::string& tpl = lookup(lang, key);
    std::string out;
    out.reserve(tpl.size());
    for (std::size_t i = 0; i < tpl.size();) {
        if (tpl[i] == '{') {
            auto close = tpl.find('}', i);
            if (close != std::string::npos) {
                auto it = params.find(tpl.substr(i + 1, close - i - 1));
                if (it != params.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        out += tpl[i++];
    }
    return out;
}

std::vector<std::string> LocaleCatalogs::key_set_mismatches() const {
    std::set<std::string> all;
    for (const auto& [lang, t] : tables_) {
        for (const auto& [k, v] : t) all.insert(k);
    }
    std::vector<std::string> out;
    for (const auto& [lang, t] : tables_) {
        for (const auto& k : all) {
            if (!t.count(k)) out.push_back(lang + ":" + k);
        }
    }
    return out;
}

}  // namespace taxolint
