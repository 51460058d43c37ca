// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors

#include "taxolint/entity.hpp"

#include <charconv>

#include "taxolint/error.hpp"

namespace taxolint {

EntityId::EntityId(std::uint64_t numeric) : numeric_(numeric) {
    if (numeric == 0) throw MalformedId("entity ids start at Q1");
}

std::optional<EntityId> EntityId::parse(std::string_view text) noexcept {
    if (text.size() < 2 || text.front() != 'Q') return std::nullopt;
    std::string_view digits = text.substr(1);
    // from_chars would accept a leading '+' in some implementations; be strict.
    for (char c : digits) {
        if (c < '0' || c > '9') return std::nullopt;
    }
    if (digits.size() > 1 && digits.front() == '0') return std::nullopt;
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || value == 0) return std::nullopt;
    EntityId id;
    id.numeric_ = value;
    return id;
}

EntityId EntityId::from_string(std::string_view text) {
    auto id = parse(text);
    if (!id) throw MalformedId("malformed entity id '" + std::string(text) + "'");
    return *id;
}

std::string EntityId::str() const { return "Q" + std::to_string(numeric_); }

std::string_view property_name(EdgeKind kind) noexcept {
    return kind == EdgeKind::InstanceOf ? "P31" : "P279";
}

std::optional<EdgeKind> parse_property(std::string_view text) noexcept {
    if (text == "P31") return EdgeKind::InstanceOf;
    if (text == "P279") return EdgeKind::SubclassOf;
    return std::nullopt;
}

MetaclassPolicy MetaclassPolicy::defaults() {
    MetaclassPolicy policy;
    policy.abstract_class_ids = {EntityId(16889133)};
    policy.technical_node_ids = {EntityId(16889133), EntityId(13442814), EntityId(4167410)};
    return policy;
}

}  // namespace taxolint
