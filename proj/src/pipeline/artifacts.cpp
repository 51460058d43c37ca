// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>

#include <unistd.h>

#include "taxolint/error.hpp"
#include "taxolint/pipeline.hpp"

namespace taxolint {

namespace {

constexpr std::string_view kFlagsHeader = "qid,tag,detail";
constexpr std::string_view kComponentsHeader = "component,size,entry_points";
constexpr std::string_view kRiskHeader =
    "qid,p31_cnt,p279_cnt,dim_connection,dim_coherence,dim_depth_var,dim_alignment,aggregate";
constexpr std::string_view kDriftHeader = "qid,parent_cnt,min_depth,segment,drift_raw,drift_adj,flagged";
constexpr std::string_view kRootsHeader = "root_qid,cnt,avg_drift,p90,high_ratio";
constexpr std::string_view kHeatmapHeader = "group,bin_lo,bin_hi,count";

// Splits into exactly `n` fields; the last one keeps any further commas.
std::vector<std::string_view> split_fields(std::string_view line, std::size_t n, std::size_t line_no) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (out.size() + 1 < n) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) break;
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    out.push_back(line.substr(start));
    if (out.size() != n)
        throw MalformedLine("line " + std::to_string(line_no) + ": expected " + std::to_string(n) + " fields");
    return out;
}

template <typename Fn>
void for_each_row(std::istream& in, std::string_view header, std::size_t fields, Fn&& fn) {
    std::string line;
    if (!std::getline(in, line)) return;  // empty file: no rows
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw MalformedLine("unexpected CSV header '" + line + "'");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        fn(split_fields(line, fields, line_no), line_no);
    }
}

template <typename T>
T parse_int(std::string_view s) {
    T out{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw MalformedLine("bad integer '" + std::string(s) + "'");
    return out;
}

EntityId parse_qid(std::string_view s) {
    auto id = EntityId::parse(s);
    if (!id) throw MalformedLine("bad entity id '" + std::string(s) + "'");
    return *id;
}

bool parse_bool(std::string_view s) {
    if (s == "1") return true;
    if (s == "0") return false;
    throw MalformedLine("bad flag '" + std::string(s) + "'");
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    (void)ec;
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    double out = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw MalformedLine("bad number '" + std::string(text) + "'");
    return out;
}

AtomicFile::AtomicFile(std::filesystem::path target) : target_(std::move(target)) {
    if (target_.has_parent_path()) std::filesystem::create_directories(target_.parent_path());
    std::random_device rd;
    temp_ = target_;
    temp_ += ".tmp-" + std::to_string(::getpid()) + "-" + std::to_string(rd());
    out_.open(temp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw InputUnreadable("cannot write " + temp_.string());
}

AtomicFile::~AtomicFile() {
    if (committed_) return;
    out_.close();
    std::error_code ec;
    std::filesystem::remove(temp_, ec);
}

void AtomicFile::commit() {
    out_.flush();
    if (!out_) throw InputUnreadable("write failed for " + target_.string());
    out_.close();
    std::filesystem::rename(temp_, target_);
    committed_ = true;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    AtomicFile f(path);
    f.stream() << content;
    f.commit();
}

void write_flags_csv(std::ostream& out, const std::vector<AntiPatternFlag>& flags) {
    out << kFlagsHeader << '\n';
    for (const auto& f : flags) out << f.entity.str() << ',' << tag_name(f.tag) << ',' << f.detail() << '\n';
}

std::vector<FlagRow> read_flags_csv(std::istream& in) {
    std::vector<FlagRow> rows;
    for_each_row(in, kFlagsHeader, 3, [&](const auto& f, std::size_t) {
        if (!parse_tag(f[1])) throw MalformedLine("unknown tag '" + std::string(f[1]) + "'");
        rows.push_back({parse_qid(f[0]), std::string(f[1]), std::string(f[2])});
    });
    return rows;
}

void write_components_csv(std::ostream& out, const TaxonomyGraph& g, const ComponentLabeling& labeling) {
    out << kComponentsHeader << '\n';
    for (ComponentId c = 0; c < labeling.component_count(); ++c) {
        out << c << ',' << labeling.component_sizes[c] << ',';
        const auto entries = entry_points(g, labeling, c);
        for (std::size_t i = 0; i < entries.size(); ++i) out << (i ? " " : "") << entries[i].str();
        out << '\n';
    }
}

void write_risk_csv(std::ostream& out, const std::vector<RiskReport>& reports) {
    out << kRiskHeader << '\n';
    for (const auto& r : reports) {
        out << r.entity.str() << ',' << r.p31_count << ',' << r.p279_count;
        for (double d : r.dims) out << ',' << format_double(d);
        out << ',' << format_double(r.aggregate) << '\n';
    }
}

std::vector<RiskReport> read_risk_csv(std::istream& in) {
    std::vector<RiskReport> rows;
    for_each_row(in, kRiskHeader, 8, [&](const auto& f, std::size_t) {
        RiskReport r;
        r.entity = parse_qid(f[0]);
        r.p31_count = parse_int<std::size_t>(f[1]);
        r.p279_count = parse_int<std::size_t>(f[2]);
        for (std::size_t i = 0; i < 4; ++i) r.dims[i] = parse_double(f[3 + i]);
        r.aggregate = parse_double(f[7]);
        rows.push_back(std::move(r));
    });
    return rows;
}

void write_drift_csv(std::ostream& out, const std::vector<DriftRecord>& records) {
    out << kDriftHeader << '\n';
    for (const auto& r : records) {
        out << r.entity.str() << ',' << r.parent_cnt << ',';
        if (r.min_depth != kUnreached) out << r.min_depth;
        out << ',' << segment_name(r.segment) << ',' << format_double(r.drift_raw) << ','
            << format_double(r.drift_adj) << ',' << (r.flagged ? 1 : 0) << '\n';
    }
}

std::vector<DriftRecord> read_drift_csv(std::istream& in) {
    std::vector<DriftRecord> rows;
    for_each_row(in, kDriftHeader, 7, [&](const auto& f, std::size_t) {
        DriftRecord r;
        r.entity = parse_qid(f[0]);
        r.parent_cnt = parse_int<std::size_t>(f[1]);
        r.min_depth = f[2].empty() ? kUnreached : parse_int<HopCount>(f[2]);
        r.segment = parse_segment(f[3]);
        r.drift_raw = parse_double(f[4]);
        r.drift_adj = parse_double(f[5]);
        r.flagged = parse_bool(f[6]);
        rows.push_back(r);
    });
    return rows;
}

void write_roots_csv(std::ostream& out, const std::vector<RootAggregate>& roots) {
    out << kRootsHeader << '\n';
    for (const auto& r : roots) {
        out << root_label(r.root) << ',' << r.cnt << ',' << format_double(r.avg_drift) << ','
            << format_double(r.p90) << ',' << format_double(r.high_ratio) << '\n';
    }
}

std::vector<RootAggregate> read_roots_csv(std::istream& in) {
    std::vector<RootAggregate> rows;
    for_each_row(in, kRootsHeader, 5, [&](const auto& f, std::size_t) {
        RootAggregate r;
        auto root = parse_root_label(f[0]);
        if (!root) throw MalformedLine("bad root '" + std::string(f[0]) + "'");
        r.root = *root;
        r.cnt = parse_int<std::size_t>(f[1]);
        r.avg_drift = parse_double(f[2]);
        r.p90 = parse_double(f[3]);
        r.high_ratio = parse_double(f[4]);
        rows.push_back(r);
    });
    return rows;
}

void write_heatmap_csv(std::ostream& out, const Heatmap& h) {
    out << kHeatmapHeader << '\n';
    const auto bins = drift_bins();
    for (auto group : {ParentGroup::UpTo2, ParentGroup::From3To6, ParentGroup::Over6}) {
        for (std::size_t b = 0; b < bins.size(); ++b) {
            out << parent_group_name(group) << ',' << format_double(bins[b].lo) << ',' << format_double(bins[b].hi)
                << ',' << h.counts[static_cast<int>(group)][b] << '\n';
        }
    }
}

Heatmap read_heatmap_csv(std::istream& in) {
    Heatmap h;
    for_each_row(in, kHeatmapHeader, 4, [&](const auto& f, std::size_t line_no) {
        int group = -1;
        for (auto g : {ParentGroup::UpTo2, ParentGroup::From3To6, ParentGroup::Over6})
            if (parent_group_name(g) == f[0]) group = static_cast<int>(g);
        if (group < 0) throw MalformedLine("line " + std::to_string(line_no) + ": unknown group");
        const std::size_t bin = drift_bin_of(parse_double(f[1]));
        h.counts[group][bin] = parse_int<std::size_t>(f[3]);
    });
    return h;
}

int exit_code_for(const std::exception& e) noexcept {
    if (dynamic_cast<const MissingArtifact*>(&e) || dynamic_cast<const CacheCorrupt*>(&e)) return kExitMissingArtifact;
    if (dynamic_cast<const ProviderUnavailable*>(&e) || dynamic_cast<const NetworkError*>(&e) ||
        dynamic_cast<const RateLimited*>(&e))
        return kExitProvider;
    if (dynamic_cast<const Error*>(&e)) return kExitBadInput;
    if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return kExitBadInput;
    return 1;
}

}  // namespace taxolint
