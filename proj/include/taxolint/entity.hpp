// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors
#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace taxolint {

// Wikidata item identifier, the N in "QN". A default-constructed id is the
// null id (numeric 0) and never names a real entity.
class EntityId {
public:
    constexpr EntityId() = default;
    explicit EntityId(std::uint64_t numeric);

    // Accepts exactly "Q" followed by decimal digits with value >= 1.
    static std::optional<EntityId> parse(std::string_view text) noexcept;
    // Like parse() but throws MalformedId.
    static EntityId from_string(std::string_view text);

    constexpr std::uint64_t numeric() const noexcept { return numeric_; }
    constexpr bool valid() const noexcept { return numeric_ != 0; }
    std::string str() const;

    friend constexpr auto operator<=>(EntityId, EntityId) = default;

private:
    std::uint64_t numeric_ = 0;
};

enum class EdgeKind : std::uint8_t { InstanceOf = 0, SubclassOf = 1 };

inline constexpr EdgeKind kAllEdgeKinds[] = {EdgeKind::InstanceOf, EdgeKind::SubclassOf};

// "P31" / "P279".
std::string_view property_name(EdgeKind kind) noexcept;
std::optional<EdgeKind> parse_property(std::string_view text) noexcept;

// child -kind-> parent, in subject-property-object order.
struct Edge {
    EntityId child;
    EdgeKind kind = EdgeKind::SubclassOf;
    EntityId parent;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct EntityText {
    EntityId entity;
    std::string language;
    std::string label;
    std::string description;

    friend bool operator==(const EntityText&, const EntityText&) = default;
};

// Which entities count as abstract metaclasses (P31 links to them are not
// instance-role evidence) and which are technical nodes dropped as parents.
struct MetaclassPolicy {
    std::set<EntityId> abstract_class_ids;
    std::set<EntityId> technical_node_ids;

    // Q16889133 (class) as the only metaclass; Q16889133, Q13442814
    // (Wikimedia category) and Q4167410 (disambiguation page) as technical.
    static MetaclassPolicy defaults();

    bool is_abstract(EntityId id) const { return abstract_class_ids.count(id) != 0; }
    bool is_technical(EntityId id) const { return technical_node_ids.count(id) != 0; }
};

}  // namespace taxolint

template <>
struct std::hash<taxolint::EntityId> {
    std::size_t operator()(taxolint::EntityId id) const noexcept {
        return std::hash<std::uint64_t>{}(id.numeric());
    }
};
