// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors
//
// taxolint command-line driver. Data goes to files (or stdout for `fetch`
// and `config`); human messages go to stderr.

#include <pthread.h>
#include <signal.h>

#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "taxolint/error.hpp"
#include "taxolint/server.hpp"

using namespace taxolint;

namespace {

// Flag values recorded as config-key overrides, applied over the --config file.
struct Invocation {
    std::string config_file;
    std::vector<std::pair<std::string, std::string>> overrides;

    // Without --config, the output directory's pipeline.conf (left by an
    // earlier stage) is the base, so chained stages keep their settings.
    PipelineConfig resolve() const {
        PipelineConfig c = config_file.empty() ? PipelineConfig{} : PipelineConfig::from_file(config_file);
        for (const auto& [k, v] : overrides) c.set(k, v);
        if (config_file.empty()) {
            const auto saved = c.artifact(artifact::kConfig);
            if (std::filesystem::exists(saved)) {
                const auto dir = c.out_dir;
                c = PipelineConfig::from_file(saved);
                c.out_dir = dir;
                for (const auto& [k, v] : overrides) c.set(k, v);
            }
        }
        return c;
    }
};

void key_option(CLI::App* app, Invocation& inv, const std::string& flag, const std::string& key,
                const std::string& help) {
    app->add_option_function<std::string>(
        flag, [&inv, key](const std::string& v) { inv.overrides.emplace_back(key, v); },
        help + " (config key " + key + ")");
}

void common_options(CLI::App* app, Invocation& inv) {
    app->add_option("-c,--config", inv.config_file, "Config file (flat key = value); flags override it")
        ->check(CLI::ExistingFile);
    key_option(app, inv, "-o,--out", "output.dir", "Artifact directory");
    key_option(app, inv, "-j,--jobs", "jobs", "Worker threads, 0 for all cores");
    app->add_option_function<std::vector<std::string>>(
        "--set",
        [&inv](const std::vector<std::string>& items) {
            for (const auto& item : items) {
                const auto eq = item.find('=');
                if (eq == std::string::npos) throw CLI::ValidationError("--set", "expected KEY=VALUE, got '" + item + "'");
                inv.overrides.emplace_back(item.substr(0, eq), item.substr(eq + 1));
            }
        },
        "Override any config key, KEY=VALUE (repeatable)");
}

void input_options(CLI::App* app, Invocation& inv) {
    key_option(app, inv, "--triples", "input.triples", "Triples TSV (Q<n> P31|P279 Q<n>)");
    key_option(app, inv, "--dump", "input.dump", "Entity-per-line JSON dump");
    key_option(app, inv, "--texts", "input.texts", "Texts TSV (qid, language, label, description)");
}

void policy_option(CLI::App* app, Invocation& inv) {
    key_option(app, inv, "--policy", "input.policy", "Metaclass policy JSON");
}

void cme_options(CLI::App* app, Invocation& inv) {
    key_option(app, inv, "--max-paths", "cme.max_paths", "Witness paths per redundant edge, 1..64");
    key_option(app, inv, "--witness-depth", "cme.witness_depth", "Longest witness path in hops");
}

void score_options(CLI::App* app, Invocation& inv) {
    key_option(app, inv, "--root", "risk.root", "Root entity for depth and alignment");
    key_option(app, inv, "--weights", "risk.weights", "Four comma-separated dimension weights");
    key_option(app, inv, "--parent-mode", "risk.parent_mode", "union or per-kind");
}

void drift_options(CLI::App* app, Invocation& inv) {
    key_option(app, inv, "--provider", "provider", "Embedding provider: offline or remote");
    key_option(app, inv, "--threshold", "drift.threshold", "Flag entities with adjusted drift at or above this");
    key_option(app, inv, "--endpoint", "provider.endpoint", "Remote embeddings endpoint");
    key_option(app, inv, "--model", "provider.model", "Remote embedding model");
    key_option(app, inv, "--dimension", "provider.dimension", "Embedding dimension");
    key_option(app, inv, "--cache", "drift.cache", "Embedding cache file");
    key_option(app, inv, "--language", "language", "Text language, falling back to en");
}

void report_ingest(const IngestSummary& s, const PipelineConfig& c) {
    const auto malformed = s.triples.malformed + s.dump.malformed + s.texts.malformed;
    std::cerr << "ingest: " << s.nodes << " nodes, " << s.edges() << " edges (P31 " << s.p31_edges << ", P279 "
              << s.p279_edges << "), " << s.text_rows << " texts, " << malformed << " malformed lines -> "
              << c.out_dir.string() << "\n";
}

// SIGINT/SIGTERM stop the server from a dedicated thread rather than a handler.
int serve(ApiServer& server, const std::string& host, int port, const std::filesystem::path& data_dir) {
    const int bound = server.bind(host, port);
    if (bound < 0) {
        std::cerr << "taxolint: cannot bind " << host << ":" << port << "\n";
        return kExitBind;
    }
    const auto s = server.snapshot();
    std::cerr << "taxolint serve: listening on http://" << host << ":" << bound << " data=" << data_dir.string()
              << " nodes=" << s->graph.node_count() << " edges=" << s->graph.edge_count()
              << " texts=" << s->texts.size() << " risk=" << s->risk.size() << " drift=" << s->drift.size()
              << " flags=" << s->flag_count << " port=" << bound << std::endl;

    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    std::atomic<bool> done{false};
    std::thread waiter([&] {
        int sig = 0;
        sigwait(&set, &sig);
        if (!done) server.stop();
    });
    server.listen();
    done = true;
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    std::cerr << "taxolint serve: stopped\n";
    return kExitOk;
}

nlohmann::ordered_json fetched_json(EntityId qid, const DumpEntity& e) {
    nlohmann::ordered_json doc;
    doc["qid"] = qid.str();
    doc["edges"] = nlohmann::ordered_json::array();
    for (const auto& r : e.edges)
        doc["edges"].push_back({r.child.str(), std::string(property_name(r.kind)), r.parent.str()});
    if (e.text) {
        doc["text"] = {{"language", e.text->language}, {"label", e.text->label}, {"description", e.text->description}};
    } else {
        doc["text"] = nullptr;
    }
    return doc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"taxolint: class/instance consistency checks for P31/P279 taxonomies"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "taxolint 0.1.0");
    Invocation inv;
    std::function<int()> action;

    auto* ingest = app.add_subcommand("ingest", "Parse triples/dump/texts into canonical artifacts");
    common_options(ingest, inv);
    input_options(ingest, inv);
    key_option(ingest, inv, "--language", "language", "Preferred text language");
    ingest->callback([&] {
        action = [&] {
            const auto c = inv.resolve();
            report_ingest(run_ingest(c), c);
            return kExitOk;
        };
    });

    auto* cme = app.add_subcommand("cme", "Components and anti-pattern flags");
    common_options(cme, inv);
    cme_options(cme, inv);
    policy_option(cme, inv);
    cme->callback([&] {
        action = [&] {
            const auto c = inv.resolve();
            const auto flags = run_cme(c);
            std::cerr << "cme: " << flags.size() << " flags -> " << c.artifact(artifact::kFlags).string() << "\n";
            return kExitOk;
        };
    });

    auto* pure = app.add_subcommand("pure", "Pure-class report");
    common_options(pure, inv);
    policy_option(pure, inv);
    pure->callback([&] {
        action = [&] {
            const auto c = inv.resolve();
            const auto r = run_pure(c);
            std::cerr << "pure: " << r.pure_classes.size() << " pure classes, " << r.pure_with_instances.size()
                      << " with instances, coverage " << r.coverage_ratio << "\n";
            return kExitOk;
        };
    });

    auto* score = app.add_subcommand("score", "Per-entity risk scores");
    common_options(score, inv);
    score_options(score, inv);
    policy_option(score, inv);
    score->callback([&] {
        action = [&] {
            const auto c = inv.resolve();
            const auto rows = run_score(c);
            std::cerr << "score: " << rows.size() << " entities -> " << c.artifact(artifact::kRisk).string() << "\n";
            return kExitOk;
        };
    });

    auto* drift = app.add_subcommand("drift", "Embedding drift for multi-parent entities");
    common_options(drift, inv);
    drift_options(drift, inv);
    policy_option(drift, inv);
    drift->callback([&] {
        action = [&] {
            const auto c = inv.resolve();
            const auto r = run_drift(c);
            const auto flagged = std::count_if(r.records.begin(), r.records.end(), [](const auto& d) { return d.flagged; });
            std::cerr << "drift: " << r.records.size() << " records, " << flagged << " flagged, " << r.discarded
                      << " screened out, " << r.skipped.size() << " skipped -> "
                      << c.artifact(artifact::kDrift).string() << "\n";
            return kExitOk;
        };
    });

    auto* aggregate = app.add_subcommand("aggregate", "Per-root drift statistics (needs drift.csv)");
    common_options(aggregate, inv);
    policy_option(aggregate, inv);
    aggregate->callback([&] {
        action = [&] {
            const auto c = inv.resolve();
            const auto roots = run_aggregate(c);
            std::cerr << "aggregate: " << roots.size() << " roots -> " << c.artifact(artifact::kRoots).string() << "\n";
            return kExitOk;
        };
    });

    auto* heat = app.add_subcommand("heatmap", "Parent-count by drift heatmap (needs drift.csv)");
    common_options(heat, inv);
    heat->callback([&] {
        action = [&] {
            const auto c = inv.resolve();
            const auto h = run_heatmap(c);
            std::cerr << "heatmap: " << h.total() << " records -> " << c.artifact(artifact::kHeatmap).string() << "\n";
            return kExitOk;
        };
    });

    auto* run = app.add_subcommand("run", "Every stage in order");
    common_options(run, inv);
    input_options(run, inv);
    policy_option(run, inv);
    cme_options(run, inv);
    score_options(run, inv);
    drift_options(run, inv);
    run->callback([&] {
        action = [&] {
            const auto c = inv.resolve();
            run_all(c);
            std::cerr << "run: artifacts in " << c.out_dir.string() << "\n";
            return kExitOk;
        };
    });

    std::string host = "127.0.0.1";
    int port = 8080;
    std::string data_dir, static_dir;
    bool offline = false;
    unsigned job_workers = 2;
    std::size_t job_capacity = 2;
    auto* srv = app.add_subcommand("serve", "HTTP API over an artifact directory");
    srv->add_option("--host", host, "Bind address")->capture_default_str();
    srv->add_option("-p,--port", port, "Port, 0 for any free port")->capture_default_str()->check(CLI::Range(0, 65535));
    srv->add_option("-d,--data-dir", data_dir, "Artifact directory (default: $TAXOLINT_DATA_DIR)");
    srv->add_option("--static", static_dir, "Directory served at /")->check(CLI::ExistingDirectory);
    srv->add_flag("--offline", offline, "Never fetch entities missing from the snapshot");
    srv->add_option("--job-workers", job_workers, "Scan job worker threads")->capture_default_str();
    srv->add_option("--job-capacity", job_capacity, "Queued plus running scan jobs before 429")->capture_default_str();
    srv->callback([&] {
        action = [&] {
            std::filesystem::path dir = data_dir;
            if (dir.empty()) {
                const char* env = std::getenv("TAXOLINT_DATA_DIR");
                if (!env || !*env) throw InvalidConfig("no data directory: pass --data-dir or set TAXOLINT_DATA_DIR");
                dir = env;
            }
            // Blocked before the server starts threads so only the waiter in
            // serve() receives them.
            sigset_t set;
            sigemptyset(&set);
            sigaddset(&set, SIGINT);
            sigaddset(&set, SIGTERM);
            pthread_sigmask(SIG_BLOCK, &set, nullptr);
            ServerOptions o;
            o.data_dir = dir;
            o.static_dir = static_dir;
            o.live_fetch = !offline;
            o.job_workers = job_workers;
            o.job_capacity = job_capacity;
            o.wikidata.cache_dir = dir / "live-cache";
            ApiServer server(std::move(o));
            return serve(server, host, port, dir);
        };
    });

    std::string fetch_qid, fetch_endpoint, fetch_cache, fetch_lang = "en";
    auto* fetch = app.add_subcommand("fetch", "Fetch one entity from the live API and print it as JSON");
    fetch->add_option("qid", fetch_qid, "Entity id, e.g. Q35120")->required();
    fetch->add_option("--endpoint", fetch_endpoint, "wbgetentities endpoint");
    fetch->add_option("--cache-dir", fetch_cache, "Dated response cache");
    fetch->add_option("--language", fetch_lang, "Text language")->capture_default_str();
    fetch->callback([&] {
        action = [&] {
            const auto qid = EntityId::parse(fetch_qid);
            if (!qid) throw MalformedId("'" + fetch_qid + "' is not an entity id");
            WikidataClientOptions o;
            if (!fetch_endpoint.empty()) o.endpoint = fetch_endpoint;
            o.cache_dir = fetch_cache;
            o.language = fetch_lang;
            WikidataClient client(std::move(o));
            std::cout << fetched_json(*qid, client.fetch(*qid)).dump(2) << "\n";
            return kExitOk;
        };
    });

    auto* config = app.add_subcommand("config", "Print the effective config");
    common_options(config, inv);
    input_options(config, inv);
    policy_option(config, inv);
    cme_options(config, inv);
    score_options(config, inv);
    drift_options(config, inv);
    config->callback([&] {
        action = [&] {
            std::cout << inv.resolve().serialize();
            return kExitOk;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadInput;
    }

    try {
        return action();
    } catch (const Error& e) {
        std::cerr << "taxolint: " << e.code() << ": " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "taxolint: " << e.what() << "\n";
        return exit_code_for(e);
    }
}
