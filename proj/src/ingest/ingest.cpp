// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors

#include "taxolint/ingest.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "taxolint/error.hpp"
#include "taxolint/parallel.hpp"

namespace taxolint {

using json = nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\n'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

std::string_view strip_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

bool is_blank_or_comment(std::string_view line) {
    std::string_view t = trim(line);
    return t.empty() || t.front() == '#';
}

// Splits on '\t' into exactly n fields; false when the count differs.
template <std::size_t N>
bool split_tabs(std::string_view line, std::array<std::string_view, N>& fields) {
    std::size_t start = 0;
    for (std::size_t i = 0; i < N; ++i) {
        std::size_t tab = line.find('\t', start);
        if (i + 1 < N) {
            if (tab == std::string_view::npos) return false;
            fields[i] = line.substr(start, tab - start);
            start = tab + 1;
        } else {
            if (tab != std::string_view::npos) return false;
            fields[i] = line.substr(start);
        }
    }
    return true;
}

}  // namespace

ParseReport& ParseReport::operator+=(const ParseReport& other) {
    total += other.total;
    valid += other.valid;
    comment += other.comment;
    malformed += other.malformed;
    return *this;
}

std::optional<TripleRecord> parse_triple_line(std::string_view line) {
    std::array<std::string_view, 3> f;
    if (!split_tabs(strip_cr(line), f)) return std::nullopt;
    auto child = EntityId::parse(f[0]);
    auto kind = parse_property(f[1]);
    auto parent = EntityId::parse(f[2]);
    if (!child || !kind || !parent) return std::nullopt;
    return TripleRecord{*child, *kind, *parent, 0};
}

ParseReport parse_triples_tsv(std::istream& in, const std::function<void(const TripleRecord&)>& sink) {
    ParseReport report;
    std::string line;
    while (std::getline(in, line)) {
        ++report.total;
        if (is_blank_or_comment(line)) {
            ++report.comment;
            continue;
        }
        auto record = parse_triple_line(line);
        if (!record) {
            ++report.malformed;
            continue;
        }
        record->source_line = report.total;
        ++report.valid;
        sink(*record);
    }
    if (in.bad()) throw InputUnreadable("stream failure while reading triples");
    return report;
}

void write_triples_tsv(const TaxonomyGraph& g, std::ostream& out) {
    std::string buffer;
    g.for_each_edge([&](NodeIndex u, EdgeKind kind, NodeIndex v) {
        buffer += g.id_of(u).str();
        buffer += '\t';
        buffer += property_name(kind);
        buffer += '\t';
        buffer += g.id_of(v).str();
        buffer += '\n';
        if (buffer.size() > (1 << 16)) {
            out << buffer;
            buffer.clear();
        }
    });
    out << buffer;
}

std::string sanitize_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_run = false;
    for (char c : text) {
        if (c == '\t' || c == '\n' || c == '\r') {
            if (!in_run) out += ' ';
            in_run = true;
        } else {
            out += c;
            in_run = false;
        }
    }
    return out;
}

ParseReport parse_texts_tsv(std::istream& in, const std::function<void(EntityText)>& sink) {
    ParseReport report;
    std::string line;
    while (std::getline(in, line)) {
        ++report.total;
        if (is_blank_or_comment(line)) {
            ++report.comment;
            continue;
        }
        std::array<std::string_view, 4> f;
        std::optional<EntityId> id;
        if (split_tabs(strip_cr(line), f)) id = EntityId::parse(f[0]);
        if (!id || f[1].empty()) {
            ++report.malformed;
            continue;
        }
        ++report.valid;
        sink(EntityText{*id, std::string(f[1]), std::string(f[2]), std::string(f[3])});
    }
    if (in.bad()) throw InputUnreadable("stream failure while reading texts");
    return report;
}

void write_texts_tsv(const std::vector<EntityText>& texts, std::ostream& out) {
    for (const EntityText& t : texts) {
        out << t.entity.str() << '\t' << sanitize_text(t.language) << '\t' << sanitize_text(t.label) << '\t'
            << sanitize_text(t.description) << '\n';
    }
}

void TextIndex::add(EntityText text) {
    auto& slot = by_entity_[text.entity];
    for (auto& existing : slot) {
        if (existing.language == text.language) {
            existing = std::move(text);
            return;
        }
    }
    slot.push_back(std::move(text));
    ++size_;
}

const EntityText* TextIndex::find(EntityId id, std::string_view language) const {
    auto it = by_entity_.find(id);
    if (it == by_entity_.end()) return nullptr;
    for (const auto& t : it->second) {
        if (t.language == language) return &t;
    }
    return nullptr;
}

const EntityText* TextIndex::find_with_fallback(EntityId id, std::string_view language) const {
    if (const auto* t = find(id, language)) return t;
    return language == "en" ? nullptr : find(id, "en");
}

std::vector<EntityText> TextIndex::all() const {
    std::vector<EntityText> out;
    out.reserve(size_);
    for (const auto& [id, texts] : by_entity_) out.insert(out.end(), texts.begin(), texts.end());
    std::sort(out.begin(), out.end(), [](const EntityText& a, const EntityText& b) {
        return std::tie(a.entity, a.language) < std::tie(b.entity, b.language);
    });
    return out;
}

namespace {

std::optional<EntityId> snak_target(const json& snak) {
    if (!snak.is_object() || snak.value("snaktype", "") != "value") return std::nullopt;
    auto dv = snak.find("datavalue");
    if (dv == snak.end() || !dv->is_object()) return std::nullopt;
    auto value = dv->find("value");
    if (value == dv->end() || !value->is_object()) return std::nullopt;
    if (value->value("entity-type", "item") != "item") return std::nullopt;
    if (auto id = value->find("id"); id != value->end() && id->is_string())
        return EntityId::parse(id->get<std::string>());
    if (auto num = value->find("numeric-id"); num != value->end() && num->is_number_unsigned()) {
        auto n = num->get<std::uint64_t>();
        if (n > 0) return EntityId(n);
    }
    return std::nullopt;
}

std::string language_value(const json& entity, const char* field, std::string_view language) {
    auto block = entity.find(field);
    if (block == entity.end() || !block->is_object()) return {};
    auto entry = block->find(std::string(language));
    if (entry == block->end() || !entry->is_object()) return {};
    auto value = entry->find("value");
    if (value == entry->end() || !value->is_string()) return {};
    return sanitize_text(value->get_ref<const std::string&>());
}

}  // namespace

DumpEntity parse_dump_line(std::string_view line, std::string_view language) {
    std::string_view body = trim(line);
    if (!body.empty() && body.back() == ',') body = trim(body.substr(0, body.size() - 1));
    if (body.empty() || body == "[" || body == "]") return {};

    json entity = json::parse(body.begin(), body.end(), nullptr, /*allow_exceptions=*/false);
    if (!entity.is_object()) throw MalformedLine("dump line is not a JSON object");
    if (entity.value("type", "") != "item") return {};

    auto id_field = entity.find("id");
    if (id_field == entity.end() || !id_field->is_string()) throw MalformedLine("dump item without id");
    auto id = EntityId::parse(id_field->get<std::string>());
    if (!id) throw MalformedLine("dump item with malformed id");

    DumpEntity out;
    if (auto claims = entity.find("claims"); claims != entity.end() && claims->is_object()) {
        for (EdgeKind kind : kAllEdgeKinds) {
            auto list = claims->find(std::string(property_name(kind)));
            if (list == claims->end() || !list->is_array()) continue;
            for (const json& claim : *list) {
                if (!claim.is_object() || claim.value("rank", "normal") == "deprecated") continue;
                auto mainsnak = claim.find("mainsnak");
                if (mainsnak == claim.end()) continue;
                if (auto target = snak_target(*mainsnak)) out.edges.push_back({*id, kind, *target, 0});
            }
        }
    }
    out.text = EntityText{*id, std::string(language), language_value(entity, "labels", language),
                          language_value(entity, "descriptions", language)};
    return out;
}

DumpParseResult parse_dump_stream(std::istream& in, std::string_view language, unsigned jobs) {
    DumpParseResult result;
    constexpr std::size_t kShardLines = 4096;
    std::vector<std::string> lines;
    lines.reserve(kShardLines * std::max(1u, jobs));

    struct Shard {
        std::vector<Edge> edges;
        std::vector<EntityText> texts;
        ParseReport report;
    };

    auto flush = [&] {
        const std::size_t shard_count = (lines.size() + kShardLines - 1) / kShardLines;
        std::vector<Shard> shards(shard_count);
        parallel_chunks(shard_count, jobs, [&](std::size_t begin, std::size_t end) {
            for (std::size_t s = begin; s < end; ++s) {
                Shard& shard = shards[s];
                const std::size_t lo = s * kShardLines;
                const std::size_t hi = std::min(lines.size(), lo + kShardLines);
                for (std::size_t i = lo; i < hi; ++i) {
                    ++shard.report.total;
                    try {
                        DumpEntity entity = parse_dump_line(lines[i], language);
                        if (!entity.text) {
                            ++shard.report.comment;
                            continue;
                        }
                        ++shard.report.valid;
                        for (const auto& r : entity.edges) shard.edges.push_back(r.edge());
                        shard.texts.push_back(std::move(*entity.text));
                    } catch (const MalformedLine&) {
                        ++shard.report.malformed;
                    }
                }
            }
        });
        for (auto& shard : shards) {
            result.edges.insert(result.edges.end(), shard.edges.begin(), shard.edges.end());
            std::move(shard.texts.begin(), shard.texts.end(), std::back_inserter(result.texts));
            result.report += shard.report;
        }
        lines.clear();
    };

    std::string line;
    while (std::getline(in, line)) {
        lines.push_back(std::move(line));
        if (lines.size() >= kShardLines * std::max(1u, jobs)) flush();
    }
    if (in.bad()) throw InputUnreadable("stream failure while reading dump");
    flush();

    std::sort(result.edges.begin(), result.edges.end());
    std::sort(result.texts.begin(), result.texts.end(), [](const EntityText& a, const EntityText& b) {
        return std::tie(a.entity, a.language) < std::tie(b.entity, b.language);
    });
    return result;
}

CleanedRelations clean_relations(const TaxonomyGraph& g, const MetaclassPolicy& policy) {
    CleanedRelations out;
    GraphBuilder builder;
    builder.reserve(g.edge_count());
    for (EntityId id : g.ids()) builder.add_node(id);
    g.for_each_edge([&](NodeIndex u, EdgeKind kind, NodeIndex v) {
        if (policy.is_technical(g.id_of(v))) {
            ++out.excluded_edge_count;
            return;
        }
        builder.add(g.id_of(u), kind, g.id_of(v));
    });
    out.graph = std::move(builder).finalize();
    return out;
}

}  // namespace taxolint
