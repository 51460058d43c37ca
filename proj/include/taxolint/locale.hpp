// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace taxolint {

// Flat key -> string tables for en/zh/ja. English is the fallback for
// unknown locales and missing keys.
class LocaleCatalogs {
public:
    // The catalogs compiled into the binary.
    static const LocaleCatalogs& builtin();
    // Loads <dir>/<lang>.json for each supported language.
    static LocaleCatalogs load_directory(const std::filesystem::path& dir);
    // Builds from raw JSON documents keyed by language.
    static LocaleCatalogs from_json(const std::map<std::string, std::string>& documents);

    static constexpr std::string_view kSupported[] = {"en", "zh", "ja"};

    bool has_locale(std::string_view lang) const;
    // Resolves lang (falling back to en) then key (falling back to en, then the key).
    const std::string& lookup(std::string_view lang, std::string_view key) const;
    // Substitutes "{name}" placeholders.
    std::string format(std::string_view lang, std::string_view key,
                       const std::map<std::string, std::string>& params) const;
    const std::map<std::string, std::string>& table(std::string_view lang) const;

    // Keys present in some catalog but missing from another, as "lang:key".
    std::vector<std::string> key_set_mismatches() const;

private:
    std::map<std::string, std::map<std::string, std::string>, std::less<>> tables_;
};

}  // namespace taxolint
