// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "taxolint/error.hpp"
#include "taxolint/server.hpp"

namespace taxolint {

using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kJsonType = "application/json; charset=utf-8";
const std::set<std::string> kScanStages = {"cme", "risk", "drift"};

class HttpError : public std::runtime_error {
public:
    HttpError(int status, std::string code, const std::string& message)
        : std::runtime_error(message), status(status), code(std::move(code)) {}
    int status;
    std::string code;
};

void send_json(httplib::Response& res, const ojson& doc, int status = 200) {
    res.status = status;
    res.set_content(doc.dump(), kJsonType);
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
    ojson doc;
    doc["api"] = kApiVersion;
    doc["error"] = {{"code", code}, {"message", message}};
    send_json(res, doc, status);
}

int status_for(const Error& e) {
    const auto& c = e.code();
    if (c == "MalformedId" || c == "InvalidConfig" || c == "MalformedLine") return 400;
    if (c == "UnknownEntity" || c == "UnknownQid") return 404;
    if (c == "EmptyText" || c == "TooFewParents" || c == "RootMissing") return 422;
    if (c == "MissingArtifact") return 503;
    if (c == "NetworkError" || c == "RateLimited" || c == "ProviderUnavailable") return 502;
    return 500;
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
    return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
        try {
            fn(req, res);
        } catch (const HttpError& e) {
            send_error(res, e.status, e.code, e.what());
        } catch (const Error& e) {
            send_error(res, status_for(e), e.code(), e.what());
        } catch (const std::exception& e) {
            send_error(res, 500, "Internal", e.what());
        }
    };
}

EntityId parse_qid_param(const std::string& text) {
    auto id = EntityId::parse(text);
    if (!id) throw HttpError(400, "MalformedId", "'" + text + "' is not an entity id (expected Q<n>)");
    return *id;
}

long parse_int_param(const httplib::Request& req, const char* name, long fallback, long lo, long hi) {
    if (!req.has_param(name)) return fallback;
    const auto text = req.get_param_value(name);
    long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || v < lo || v > hi) {
        throw HttpError(400, "InvalidParameter",
                        std::string(name) + " must be an integer in " + std::to_string(lo) + ".." + std::to_string(hi));
    }
    return v;
}

ojson nullable_hops(HopCount h) { return h == kUnreached ? ojson(nullptr) : ojson(h); }

ojson ids_json(const std::vector<EntityId>& ids) {
    auto out = ojson::array();
    for (auto id : ids) out.push_back(id.str());
    return out;
}

std::string label_of(const AnalysisSnapshot& s, EntityId id, std::string_view lang) {
    const auto* t = s.texts.find_with_fallback(id, lang);
    return t ? t->label : std::string();
}

ojson risk_json(const RiskReport& r, const RiskConfig& config) {
    ojson doc;
    doc["p31_cnt"] = r.p31_count;
    doc["p279_cnt"] = r.p279_count;
    ojson dims, weights;
    const auto w = config.weights.normalized();
    for (auto d : kAllDimensions) {
        dims[std::string(dimension_key(d))] = r.dim(d);
        weights[std::string(dimension_key(d))] = w[d];
    }
    doc["dims"] = std::move(dims);
    doc["weights"] = std::move(weights);
    doc["aggregate"] = r.aggregate;
    doc["parent_distances"] = r.raw_parent_distances;
    doc["parent_depths"] = r.parent_depths;
    doc["parents_without_depth"] = ids_json(r.parents_without_depth);
    doc["depth_variance"] = r.depth_variance;
    doc["alignment_applicable"] = r.alignment_applicable;
    doc["cross_distance"] = r.cross_distance ? ojson(*r.cross_distance) : ojson(nullptr);
    return doc;
}

ojson drift_json(const DriftRecord& r) {
    ojson doc;
    doc["parent_cnt"] = r.parent_cnt;
    doc["min_depth"] = nullable_hops(r.min_depth);
    doc["segment"] = segment_name(r.segment);
    doc["drift_raw"] = r.drift_raw;
    doc["drift_adj"] = r.drift_adj;
    doc["flagged"] = r.flagged;
    return doc;
}

ojson entity_document(const AnalysisSnapshot& s, EntityId qid, const LocaleCatalogs& catalogs,
                      const std::string& requested_lang, const char* source) {
    const std::string lang = catalogs.has_locale(requested_lang) ? requested_lang : "en";
    const NodeIndex node = s.graph.index_of(qid);
    ojson doc;
    doc["api"] = kApiVersion;
    doc["qid"] = qid.str();
    doc["source"] = source;
    doc["locale"] = lang;

    const auto* text = s.texts.find_with_fallback(qid, lang);
    doc["label"] = text ? text->label : "";
    doc["description"] = text ? text->description : "";
    doc["text_language"] = text ? ojson(text->language) : ojson(nullptr);

    ojson parents, children;
    for (EdgeKind kind : kAllEdgeKinds) {
        auto list = ojson::array();
        for (NodeIndex p : s.graph.parents(node, kind)) {
            const auto pid = s.graph.id_of(p);
            list.push_back({{"qid", pid.str()}, {"label", label_of(s, pid, lang)}});
        }
        parents[std::string(property_name(kind))] = std::move(list);
        children[std::string(property_name(kind))] = s.graph.children(node, kind).size();
    }
    doc["parents"] = std::move(parents);
    doc["children_count"] = std::move(children);

    std::optional<RiskReport> report;
    if (s.scorer) report = s.scorer->score(qid);
    if (auto it = s.risk.find(qid); it != s.risk.end()) {
        if (!report) report = RiskReport{};
        report->entity = qid;
        report->p31_count = it->second.p31_count;
        report->p279_count = it->second.p279_count;
        report->dims = it->second.dims;
        report->aggregate = it->second.aggregate;
    }
    doc["risk"] = report ? risk_json(*report, s.config.risk) : ojson(nullptr);

    auto drift = s.drift.find(qid);
    doc["drift"] = drift == s.drift.end() ? ojson(nullptr) : drift_json(drift->second);

    auto narrative = ojson::array();
    if (report) {
        for (const auto& item : narrate_risk(*report, catalogs, lang)) {
            ojson n;
            n["severity"] = item.severity == Severity::Strength ? "strength" : "issue";
            n["dimension"] = dimension_key(item.dimension);
            n["key"] = item.message_key;
            n["params"] = item.params;
            n["message"] = item.message;
            narrative.push_back(std::move(n));
        }
    }
    doc["narrative"] = std::move(narrative);

    auto flags = ojson::array();
    if (auto it = s.flags.find(qid); it != s.flags.end()) {
        for (const auto& f : it->second) flags.push_back({{"tag", f.tag}, {"detail", f.detail}});
    }
    doc["flags"] = std::move(flags);
    return doc;
}

std::vector<EntityId> component_members(const TaxonomyGraph& g, EntityId seed) {
    const auto labeling = weakly_connected_components(g);
    std::vector<EntityId> out;
    for (NodeIndex u : labeling.members(labeling.component_of[g.index_of(seed)])) out.push_back(g.id_of(u));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

struct ApiServer::Impl {
    ServerOptions options;
    const LocaleCatalogs* catalogs = nullptr;
    mutable std::mutex snapshot_mutex;
    std::shared_ptr<const AnalysisSnapshot> current;
    std::unique_ptr<WikidataClient> wikidata;
    httplib::Server http;
    std::thread listener;
    int port = -1;
    std::filesystem::path jobs_dir;
    std::unique_ptr<JobRunner> jobs;  // last: destroyed first

    std::shared_ptr<const AnalysisSnapshot> require_snapshot() const {
        std::lock_guard lock(snapshot_mutex);
        if (!current) throw HttpError(503, "SnapshotNotLoaded", "no analysis snapshot is loaded");
        return current;
    }

    void routes();
    void entity(const httplib::Request& req, httplib::Response& res);
    std::map<std::string, std::string> run_scan(const std::string& id, const ScanSpec& spec,
                                                const std::function<void(double)>& progress);
};

void ApiServer::Impl::routes() {
    // httplib's default adds SO_REUSEPORT, which lets a second server share a
    // port that is already in use.
    http.set_socket_options([](socket_t sock) {
        int yes = 1;
        ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
    });
    http.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (res.body.empty()) {
            send_error(res, res.status, res.status == 404 ? "NotFound" : "HttpError",
                       "no route for " + req.method + " " + req.path);
        }
    });

    http.Get("/api/status", guarded([this](const httplib::Request&, httplib::Response& res) {
        ojson doc;
        doc["api"] = kApiVersion;
        std::shared_ptr<const AnalysisSnapshot> s;
        {
            std::lock_guard lock(snapshot_mutex);
            s = current;
        }
        doc["loaded"] = static_cast<bool>(s);
        if (s) {
            doc["snapshot"] = {{"nodes", s->graph.node_count()},
                               {"edges", s->graph.edge_count()},
                               {"texts", s->texts.size()},
                               {"risk_rows", s->risk.size()},
                               {"drift_rows", s->drift.size()},
                               {"flags", s->flag_count},
                               {"roots", s->roots.has_value()},
                               {"heatmap", s->heatmap.has_value()},
                               {"language", s->config.language},
                               {"provider", s->embeddings->provider->identity()}};
        }
        doc["locales"] = {"en", "zh", "ja"};
        doc["live_fetch"] = static_cast<bool>(wikidata);
        doc["max_paths"] = {{"min", 1}, {"max", 64}};
        send_json(res, doc);
    }));

    http.Get(R"(/api/entity/([^/]+))",
             guarded([this](const httplib::Request& req, httplib::Response& res) { entity(req, res); }));

    http.Get(R"(/api/entity/([^/]+)/redundancy)", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const auto qid = parse_qid_param(req.matches[1]);
                 const auto k = parse_int_param(req, "max_paths", 5, 1, 64);
                 auto s = require_snapshot();
                 if (!s->graph.contains(qid)) throw HttpError(404, "UnknownEntity", qid.str() + " is not in the snapshot");
                 auto found =
                     redundant_edges_of(s->graph, qid, static_cast<std::size_t>(k), s->config.witness_depth);
                 ojson doc;
                 doc["api"] = kApiVersion;
                 doc["qid"] = qid.str();
                 doc["max_paths"] = k;
                 auto list = ojson::array();
                 for (const auto& f : found) {
                     ojson item;
                     item["edge"] = {qid.str(), f.redundant_parent->str()};
                     auto paths = ojson::array();
                     for (const auto& w : f.witnesses) paths.push_back(ids_json(w));
                     item["witnesses"] = std::move(paths);
                     list.push_back(std::move(item));
                 }
                 doc["redundant"] = std::move(list);
                 send_json(res, doc);
             }));

    http.Get(R"(/api/entity/([^/]+)/similarity)", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const auto qid = parse_qid_param(req.matches[1]);
                 auto s = require_snapshot();
                 if (!s->clean.contains(qid)) throw HttpError(404, "UnknownEntity", qid.str() + " is not in the snapshot");
                 const auto& lang = s->config.language;
                 auto text_for = [&](EntityId id) {
                     const auto* t = s->texts.find_with_fallback(id, lang);
                     return t ? compose_text(*t) : std::string();
                 };
                 std::vector<EntityId> ids{qid};
                 std::vector<std::string> texts{text_for(qid)};
                 if (texts[0].empty()) throw EmptyText(qid.str() + " has no label or description to embed");
                 for (NodeIndex p : s->clean.union_parents(s->clean.index_of(qid))) {
                     const auto pid = s->clean.id_of(p);
                     if (pid == qid) continue;
                     auto t = text_for(pid);
                     if (t.empty()) continue;
                     ids.push_back(pid);
                     texts.push_back(std::move(t));
                 }
                 if (ids.size() < 2) throw EmptyText("no parent of " + qid.str() + " has text to embed");
                 auto vectors = s->embeddings->embedder->embed_many(texts);
                 const std::size_t n = ids.size();
                 std::vector<std::vector<double>> m(n, std::vector<double>(n));
                 for (std::size_t i = 0; i < n; ++i) {
                     for (std::size_t j = i; j < n; ++j) {
                         m[i][j] = m[j][i] = cosine_similarity(*vectors[i], *vectors[j]);
                     }
                 }
                 ojson doc;
                 doc["api"] = kApiVersion;
                 doc["qid"] = qid.str();
                 doc["provider"] = s->embeddings->provider->identity();
                 doc["labels"] = ids_json(ids);
                 auto names = ojson::array();
                 for (auto id : ids) names.push_back(label_of(*s, id, lang));
                 doc["names"] = std::move(names);
                 doc["matrix"] = m;
                 send_json(res, doc);
             }));

    http.Get("/api/roots/top", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const auto n = parse_int_param(req, "n", 20, 1, 1000000);
                 auto s = require_snapshot();
                 if (!s->roots) throw MissingArtifact("roots.csv is missing; run the drift and aggregate stages");
                 const auto& lang = req.has_param("lang") ? req.get_param_value("lang") : s->config.language;
                 ojson doc;
                 doc["api"] = kApiVersion;
                 doc["n"] = n;
                 doc["total"] = s->roots->size();
                 auto list = ojson::array();
                 for (std::size_t i = 0; i < s->roots->size() && i < static_cast<std::size_t>(n); ++i) {
                     const auto& r = (*s->roots)[i];
                     list.push_back({{"root", root_label(r.root)},
                                     {"label", r.root.valid() ? label_of(*s, r.root, lang) : ""},
                                     {"cnt", r.cnt},
                                     {"avg_drift", r.avg_drift},
                                     {"p90", r.p90},
                                     {"high_ratio", r.high_ratio}});
                 }
                 doc["roots"] = std::move(list);
                 send_json(res, doc);
             }));

    http.Get("/api/heatmap", guarded([this](const httplib::Request&, httplib::Response& res) {
                 auto s = require_snapshot();
                 if (!s->heatmap) throw MissingArtifact("heatmap.csv is missing; run the drift and heatmap stages");
                 ojson doc;
                 doc["api"] = kApiVersion;
                 doc["groups"] = {"<=2", "3-6", ">6"};
                 auto bins = ojson::array();
                 for (const auto& b : drift_bins())
                     bins.push_back({{"lo", b.lo}, {"hi", std::isinf(b.hi) ? ojson(nullptr) : ojson(b.hi)}});
                 doc["bins"] = std::move(bins);
                 doc["counts"] = s->heatmap->counts;
                 doc["total"] = s->heatmap->total();
                 send_json(res, doc);
             }));

    http.Post("/api/scan", guarded([this](const httplib::Request& req, httplib::Response& res) {
                  require_snapshot();
                  ojson body = ojson::parse(req.body, nullptr, false);
                  if (!body.is_object()) throw HttpError(400, "InvalidRequest", "body must be a JSON object");
                  ScanSpec spec;
                  if (body.contains("entities")) {
                      if (!body["entities"].is_array())
                          throw HttpError(400, "InvalidRequest", "entities must be an array of ids");
                      for (const auto& e : body["entities"]) {
                          if (!e.is_string()) throw HttpError(400, "InvalidRequest", "entities must be an array of ids");
                          spec.entities.push_back(parse_qid_param(e.get<std::string>()));
                      }
                  }
                  if (body.contains("component") && !body["component"].is_null()) {
                      if (!body["component"].is_string())
                          throw HttpError(400, "InvalidRequest", "component must be an entity id");
                      spec.component = parse_qid_param(body["component"].get<std::string>());
                  }
                  if (spec.component && !spec.entities.empty())
                      throw HttpError(400, "InvalidRequest", "give either entities or component, not both");
                  if (body.contains("stages")) {
                      if (!body["stages"].is_array()) throw HttpError(400, "InvalidRequest", "stages must be an array");
                      for (const auto& st : body["stages"]) {
                          if (!st.is_string() || !kScanStages.count(st.get<std::string>()))
                              throw HttpError(400, "InvalidRequest", "stages must be drawn from cme, risk, drift");
                          spec.stages.push_back(st.get<std::string>());
                      }
                  } else {
                      spec.stages = {"risk"};
                  }
                  if (spec.stages.empty()) throw HttpError(400, "InvalidRequest", "no stages requested");
                  auto id = jobs->submit(std::move(spec));
                  if (!id) throw HttpError(429, "QueueFull", "too many scan jobs in flight; retry later");
                  send_json(res, ojson::parse(job_to_json(*jobs->get(*id))), 202);
              }));

    http.Get(R"(/api/jobs/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 auto job = jobs->get(req.matches[1]);
                 if (!job) throw HttpError(404, "UnknownJob", "no job " + std::string(req.matches[1]));
                 send_json(res, ojson::parse(job_to_json(*job)));
             }));

    http.Get(R"(/api/jobs/([^/]+)/result/([a-z]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 auto job = jobs->get(req.matches[1]);
                 if (!job) throw HttpError(404, "UnknownJob", "no job " + std::string(req.matches[1]));
                 auto it = job->results.find(req.matches[2]);
                 if (it == job->results.end())
                     throw HttpError(404, "NoResult", "job has no result for stage " + std::string(req.matches[2]));
                 std::ifstream in(it->second, std::ios::binary);
                 if (!in) throw MissingArtifact("result file " + it->second + " is gone");
                 std::stringstream ss;
                 ss << in.rdbuf();
                 res.set_content(ss.str(), "text/csv; charset=utf-8");
             }));

    http.Get(R"(/api/i18n/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const std::string lang = req.matches[1];
                 if (!catalogs->has_locale(lang)) throw HttpError(404, "UnknownLocale", "no catalog for '" + lang + "'");
                 ojson doc;
                 doc["api"] = kApiVersion;
                 doc["lang"] = lang;
                 doc["messages"] = catalogs->table(lang);
                 send_json(res, doc);
             }));

    if (!options.static_dir.empty()) http.set_mount_point("/", options.static_dir.string());
}

void ApiServer::Impl::entity(const httplib::Request& req, httplib::Response& res) {
    const auto qid = parse_qid_param(req.matches[1]);
    const std::string lang = req.has_param("lang") ? req.get_param_value("lang") : "en";
    auto s = require_snapshot();
    if (s->graph.contains(qid)) {
        send_json(res, entity_document(*s, qid, *catalogs, lang, "snapshot"));
        return;
    }
    if (!wikidata) throw HttpError(404, "UnknownEntity", qid.str() + " is not in the snapshot and live fetch is off");

    const auto fetched = wikidata->fetch(qid);
    GraphBuilder builder;
    s->graph.for_each_edge([&](NodeIndex u, EdgeKind k, NodeIndex v) { builder.add(s->graph.id_of(u), k, s->graph.id_of(v)); });
    for (const auto& r : fetched.edges) builder.add(r.edge());
    builder.add_node(qid);
    auto live = AnalysisSnapshot::from_graph(std::move(builder).finalize(), s->config);
    live->texts = s->texts;
    if (fetched.text) live->texts.add(*fetched.text);
    for (const auto& f : detect_anti_patterns(live->graph, live->policy,
                                              {.max_paths = s->config.max_paths, .witness_depth = s->config.witness_depth})) {
        if (f.entity == qid) live->flags[qid].push_back({f.entity, std::string(tag_name(f.tag)), f.detail()});
    }
    send_json(res, entity_document(*live, qid, *catalogs, lang, "live"));
}

std::map<std::string, std::string> ApiServer::Impl::run_scan(const std::string& id, const ScanSpec& spec,
                                                             const std::function<void(double)>& progress) {
    std::shared_ptr<const AnalysisSnapshot> s;
    {
        std::lock_guard lock(snapshot_mutex);
        s = current;
    }
    if (!s) throw MissingArtifact("no analysis snapshot is loaded");

    std::vector<EntityId> ids;
    if (spec.component) {
        if (!s->graph.contains(*spec.component)) throw UnknownEntity(spec.component->str() + " is not in the snapshot");
        ids = component_members(s->graph, *spec.component);
    } else {
        ids = spec.entities;
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (auto e : ids)
            if (!s->graph.contains(e)) throw UnknownEntity(e.str() + " is not in the snapshot");
    }

    const auto out_dir = jobs_dir / id;
    std::filesystem::create_directories(out_dir);
    std::map<std::string, std::string> results;
    std::size_t done = 0;
    for (const auto& stage : spec.stages) {
        if (results.count(stage)) continue;
        std::filesystem::path path;
        if (stage == "cme") {
            path = out_dir / artifact::kFlags;
            const std::set<EntityId> wanted(ids.begin(), ids.end());
            std::vector<AntiPatternFlag> flags;
            for (auto& f : detect_anti_patterns(s->graph, s->policy,
                                                {.max_paths = s->config.max_paths,
                                                 .witness_depth = s->config.witness_depth})) {
                if (wanted.count(f.entity)) flags.push_back(std::move(f));
            }
            AtomicFile f(path);
            write_flags_csv(f.stream(), flags);
            f.commit();
        } else if (stage == "risk") {
            if (!s->scorer) throw RootMissing("risk root " + s->config.risk.root.str() + " is not in the snapshot");
            path = out_dir / artifact::kRisk;
            std::vector<RiskReport> rows;
            rows.reserve(ids.size());
            for (auto e : ids) rows.push_back(s->scorer->score(e));
            AtomicFile f(path);
            write_risk_csv(f.stream(), rows);
            f.commit();
        } else if (stage == "drift") {
            path = out_dir / artifact::kDrift;
            auto result = scan_drift(s->clean, s->texts, *s->embeddings->embedder, ids,
                                     {.threshold = s->config.drift_threshold, .language = s->config.language});
            AtomicFile f(path);
            write_drift_csv(f.stream(), result.records);
            f.commit();
        }
        results[stage] = path.string();
        progress(static_cast<double>(++done) / static_cast<double>(spec.stages.size()));
    }
    return results;
}

ApiServer::ApiServer(ServerOptions options) : impl_(std::make_unique<Impl>()) {
    impl_->options = std::move(options);
    auto& o = impl_->options;
    impl_->catalogs = o.catalogs ? o.catalogs : &LocaleCatalogs::builtin();
    if (auto bad = impl_->catalogs->key_set_mismatches(); !bad.empty())
        throw InvalidConfig("locale catalogs disagree on keys, first: " + bad.front());
    if (!o.data_dir.empty()) impl_->current = AnalysisSnapshot::load(o.data_dir);
    if (o.live_fetch && !o.wikidata.offline) {
        auto wo = o.wikidata;
        if (wo.cache_dir.empty() && !o.data_dir.empty()) wo.cache_dir = o.data_dir / "live-cache";
        impl_->wikidata = std::make_unique<WikidataClient>(std::move(wo));
    }
    impl_->jobs_dir = o.data_dir.empty()
                          ? std::filesystem::temp_directory_path() / ("taxolint-jobs-" + std::to_string(::getpid()))
                          : o.data_dir / "jobs";
    impl_->jobs = std::make_unique<JobRunner>(
        impl_->jobs_dir, o.job_workers, o.job_capacity,
        [impl = impl_.get()](const std::string& id, const ScanSpec& spec, const std::function<void(double)>& p) {
            return impl->run_scan(id, spec, p);
        });
    impl_->routes();
}

ApiServer::~ApiServer() {
    stop();
    impl_->jobs.reset();
}

void ApiServer::set_snapshot(std::shared_ptr<const AnalysisSnapshot> snapshot) {
    std::lock_guard lock(impl_->snapshot_mutex);
    impl_->current = std::move(snapshot);
}

void ApiServer::reload() {
    if (impl_->options.data_dir.empty()) throw InvalidConfig("no data directory configured");
    set_snapshot(AnalysisSnapshot::load(impl_->options.data_dir));
}

std::shared_ptr<const AnalysisSnapshot> ApiServer::snapshot() const {
    std::lock_guard lock(impl_->snapshot_mutex);
    return impl_->current;
}

int ApiServer::bind(const std::string& host, int port) {
    if (port == 0) {
        impl_->port = impl_->http.bind_to_any_port(host);
    } else {
        impl_->port = impl_->http.bind_to_port(host, port) ? port : -1;
    }
    return impl_->port;
}

void ApiServer::listen() { impl_->http.listen_after_bind(); }

int ApiServer::start(const std::string& host, int port) {
    if (bind(host, port) < 0) return -1;
    impl_->listener = std::thread([this] { listen(); });
    impl_->http.wait_until_ready();
    return impl_->port;
}

void ApiServer::stop() {
    impl_->http.stop();
    if (impl_->listener.joinable()) impl_->listener.join();
}

JobRunner& ApiServer::jobs() { return *impl_->jobs; }

}  // namespace taxolint
