// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "taxolint/error.hpp"
#include "taxolint/pipeline.hpp"

namespace taxolint {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_unsigned(std::string_view key, std::string_view value) {
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw InvalidConfig(std::string(key) + ": expected a non-negative integer, got '" + std::string(value) + "'");
    return out;
}

double parse_number(std::string_view key, std::string_view value) {
    try {
        return parse_double(value);
    } catch (const MalformedLine&) {
        throw InvalidConfig(std::string(key) + ": expected a number, got '" + std::string(value) + "'");
    }
}

double parse_positive(std::string_view key, std::string_view value) {
    const double v = parse_number(key, value);
    if (!(v > 0)) throw InvalidConfig(std::string(key) + " must be positive");
    return v;
}

RiskWeights parse_weights(std::string_view value) {
    RiskWeights w;
    std::size_t i = 0;
    std::size_t start = 0;
    while (true) {
        const auto comma = value.find(',', start);
        const auto part = trim(value.substr(start, comma == std::string_view::npos ? comma : comma - start));
        if (i >= 4) throw InvalidConfig("risk.weights: expected four comma-separated values");
        w.values[i++] = parse_number("risk.weights", part);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (i != 4) throw InvalidConfig("risk.weights: expected four comma-separated values");
    (void)w.normalized();  // validates
    return w;
}

}  // namespace

void PipelineConfig::set(std::string_view key, std::string_view raw) {
    const auto value = trim(raw);
    const std::string v(value);
    if (key == "input.triples") {
        triples = v;
    } else if (key == "input.dump") {
        dump = v;
    } else if (key == "input.texts") {
        texts = v;
    } else if (key == "input.policy") {
        policy = v;
    } else if (key == "output.dir") {
        if (v.empty()) throw InvalidConfig("output.dir must not be empty");
        out_dir = v;
    } else if (key == "language") {
        if (v.empty()) throw InvalidConfig("language must not be empty");
        language = v;
    } else if (key == "cme.max_paths") {
        max_paths = parse_unsigned<std::size_t>(key, value);
        if (max_paths < 1 || max_paths > 64) throw InvalidConfig("cme.max_paths must be in 1..64");
    } else if (key == "cme.witness_depth") {
        witness_depth = parse_unsigned<HopCount>(key, value);
        if (witness_depth < 2) throw InvalidConfig("cme.witness_depth must be at least 2");
    } else if (key == "risk.root") {
        auto id = EntityId::parse(value);
        if (!id) throw InvalidConfig("risk.root: malformed id '" + v + "'");
        risk.root = *id;
    } else if (key == "risk.weights") {
        risk.weights = parse_weights(value);
    } else if (key == "risk.distance_cap") {
        risk.distance_cap = parse_unsigned<HopCount>(key, value);
        if (risk.distance_cap < 1) throw InvalidConfig("risk.distance_cap must be at least 1");
    } else if (key == "risk.depth_cap") {
        risk.depth_cap = parse_unsigned<HopCount>(key, value);
        if (risk.depth_cap < 1) throw InvalidConfig("risk.depth_cap must be at least 1");
    } else if (key == "risk.reference_p31") {
        risk.reference_p31 = parse_number(key, value);
    } else if (key == "risk.reference_p279") {
        risk.reference_p279 = parse_number(key, value);
    } else if (key == "risk.excess_divisor") {
        risk.excess_divisor = parse_positive(key, value);
    } else if (key == "risk.variance_divisor") {
        risk.variance_divisor = parse_positive(key, value);
    } else if (key == "risk.parent_mode") {
        if (value == "union") {
            risk.parent_mode = ParentMode::Union;
        } else if (value == "per-kind") {
            risk.parent_mode = ParentMode::PerKind;
        } else {
            throw InvalidConfig("risk.parent_mode must be 'union' or 'per-kind'");
        }
    } else if (key == "drift.threshold") {
        drift_threshold = parse_number(key, value);
        if (drift_threshold < 0) throw InvalidConfig("drift.threshold must be non-negative");
    } else if (key == "drift.cache") {
        embedding_cache = v;
    } else if (key == "provider") {
        if (value != "offline" && value != "remote") throw InvalidConfig("provider must be 'offline' or 'remote'");
        provider = v;
    } else if (key == "provider.endpoint") {
        remote.endpoint = v;
    } else if (key == "provider.model") {
        remote.model = v;
    } else if (key == "provider.dimension") {
        remote.dimension = parse_unsigned<std::size_t>(key, value);
        if (remote.dimension == 0) throw InvalidConfig("provider.dimension must be positive");
    } else if (key == "provider.batch_size") {
        remote.batch_size = parse_unsigned<std::size_t>(key, value);
        if (remote.batch_size == 0) throw InvalidConfig("provider.batch_size must be positive");
    } else if (key == "provider.timeout_seconds") {
        remote.timeout_seconds = parse_unsigned<int>(key, value);
    } else if (key == "provider.seed") {
        offline_seed = parse_unsigned<std::uint64_t>(key, value);
    } else if (key == "jobs") {
        jobs = parse_unsigned<unsigned>(key, value);
        if (jobs == 0) jobs = default_jobs();
    } else {
        throw InvalidConfig("unknown configuration key '" + std::string(key) + "'");
    }
}

PipelineConfig PipelineConfig::parse(std::string_view text) {
    PipelineConfig config;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw InvalidConfig("config line " + std::to_string(line_no) + ": expected key = value");
        config.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return config;
}

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputUnreadable("cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string PipelineConfig::serialize() const {
    std::ostringstream out;
    auto kv = [&](const char* key, const std::string& value) { out << key << " = " << value << '\n'; };
    kv("input.triples", triples.string());
    kv("input.dump", dump.string());
    kv("input.texts", texts.string());
    kv("input.policy", policy.string());
    kv("output.dir", out_dir.string());
    kv("language", language);
    kv("cme.max_paths", std::to_string(max_paths));
    kv("cme.witness_depth", std::to_string(witness_depth));
    kv("risk.root", risk.root.str());
    std::string weights;
    for (std::size_t i = 0; i < 4; ++i) weights += (i ? "," : "") + format_double(risk.weights.values[i]);
    kv("risk.weights", weights);
    kv("risk.distance_cap", std::to_string(risk.distance_cap));
    kv("risk.depth_cap", std::to_string(risk.depth_cap));
    kv("risk.reference_p31", format_double(risk.reference_p31));
    kv("risk.reference_p279", format_double(risk.reference_p279));
    kv("risk.excess_divisor", format_double(risk.excess_divisor));
    kv("risk.variance_divisor", format_double(risk.variance_divisor));
    kv("risk.parent_mode", risk.parent_mode == ParentMode::Union ? "union" : "per-kind");
    kv("drift.threshold", format_double(drift_threshold));
    kv("drift.cache", embedding_cache.string());
    kv("provider", provider);
    kv("provider.endpoint", remote.endpoint);
    kv("provider.model", remote.model);
    kv("provider.dimension", std::to_string(remote.dimension));
    kv("provider.batch_size", std::to_string(remote.batch_size));
    kv("provider.timeout_seconds", std::to_string(remote.timeout_seconds));
    kv("provider.seed", std::to_string(offline_seed));
    kv("jobs", std::to_string(jobs));
    return out.str();
}

std::filesystem::path PipelineConfig::cache_path() const {
    if (!embedding_cache.empty()) return embedding_cache;
    return out_dir / ("embeddings-d" + std::to_string(remote.dimension) + ".bin");
}

MetaclassPolicy load_policy(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputUnreadable("cannot read policy " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfig("policy " + path.string() + ": " + e.what());
    }
    MetaclassPolicy policy;
    auto read_set = [&](const char* key, std::set<EntityId>& into) {
        if (!doc.contains(key)) return;
        if (!doc[key].is_array()) throw InvalidConfig(std::string("policy: ") + key + " must be an array");
        for (const auto& item : doc[key]) {
            auto id = item.is_string() ? EntityId::parse(item.get<std::string>()) : std::nullopt;
            if (!id) throw InvalidConfig(std::string("policy: malformed id in ") + key);
            into.insert(*id);
        }
    };
    if (!doc.is_object()) throw InvalidConfig("policy must be a JSON object");
    read_set("abstract_class_ids", policy.abstract_class_ids);
    read_set("technical_node_ids", policy.technical_node_ids);
    return policy;
}

MetaclassPolicy policy_for(const PipelineConfig& config) {
    return config.policy.empty() ? MetaclassPolicy::defaults() : load_policy(config.policy);
}

}  // namespace taxolint
