// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors
#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "taxolint/entity.hpp"
#include "taxolint/graph.hpp"

namespace taxolint {

struct TripleRecord {
    EntityId child;
    EdgeKind kind = EdgeKind::SubclassOf;
    EntityId parent;
    std::size_t source_line = 0;

    Edge edge() const { return {child, kind, parent}; }
};

// valid + comment + malformed == total. Blank lines count as comments.
struct ParseReport {
    std::size_t total = 0;
    std::size_t valid = 0;
    std::size_t comment = 0;
    std::size_t malformed = 0;

    ParseReport& operator+=(const ParseReport& other);
};

// Triples TSV: `Q<n>\tP31|P279\tQ<n>`, '#' comments. Malformed lines are
// counted and skipped. Throws InputUnreadable only on stream failure.
ParseReport parse_triples_tsv(std::istream& in, const std::function<void(const TripleRecord&)>& sink);
// One line without its terminator; nullopt if it is not a triple.
std::optional<TripleRecord> parse_triple_line(std::string_view line);

// Canonical serialization: one line per edge in (child, kind, parent) order.
void write_triples_tsv(const TaxonomyGraph& g, std::ostream& out);

// Replaces each run of tab / CR / LF characters with one space.
std::string sanitize_text(std::string_view text);

// Texts TSV: `<qid>\t<lang>\t<label>\t<description>`.
ParseReport parse_texts_tsv(std::istream& in, const std::function<void(EntityText)>& sink);
void write_texts_tsv(const std::vector<EntityText>& texts, std::ostream& out);

// (entity, language) -> text with fallback to English.
class TextIndex {
public:
    void add(EntityText text);
    const EntityText* find(EntityId id, std::string_view language) const;
    // Requested language first, then "en".
    const EntityText* find_with_fallback(EntityId id, std::string_view language) const;
    std::size_t size() const noexcept { return size_; }
    // Every stored text, ordered by (entity, language).
    std::vector<EntityText> all() const;

private:
    std::unordered_map<EntityId, std::vector<EntityText>> by_entity_;
    std::size_t size_ = 0;
};

struct DumpEntity {
    std::vector<TripleRecord> edges;
    std::optional<EntityText> text;
};

// One line of the entity-per-line JSON dump. Array delimiters, blank lines
// and non-item entities yield an empty result; deprecated-rank claims and
// somevalue/novalue snaks are ignored. Throws MalformedLine.
DumpEntity parse_dump_line(std::string_view line, std::string_view language = "en");

struct DumpParseResult {
    std::vector<Edge> edges;
    std::vector<EntityText> texts;
    ParseReport report;
};

// Splits the stream into line shards parsed by `jobs` workers. The output is
// sorted, so it does not depend on the worker count.
DumpParseResult parse_dump_stream(std::istream& in, std::string_view language, unsigned jobs);

struct CleanedRelations {
    TaxonomyGraph graph;
    std::size_t excluded_edge_count = 0;
};

// Drops every edge whose parent is a technical node. The node set is kept,
// so technical nodes stay present as children. Idempotent.
CleanedRelations clean_relations(const TaxonomyGraph& g, const MetaclassPolicy& policy);

}  // namespace taxolint
