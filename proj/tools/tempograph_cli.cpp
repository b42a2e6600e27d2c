// Command-line driver. Every query subcommand builds the same request
// document the HTTP service accepts and prints the shared response body.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tempograph/server.hpp"
#include "tempograph/tempograph.hpp"

namespace fs = std::filesystem;
using tempograph::ErrorCode;
using tempograph::fail;
using tempograph::api::Json;

namespace {

struct Loaded {
    tempograph::DatasetManifest manifest;
    tempograph::TemporalGraph graph;
};

// A dataset argument is a manifest file, a directory holding manifest.json,
// or a cache file.
Loaded load(const std::string& arg) {
    fs::path p(arg);
    if (fs::is_directory(p)) p /= "manifest.json";
    if (!fs::exists(p)) fail(ErrorCode::not_found, "dataset '" + arg + "' not found");
    std::ifstream in(p, std::ios::binary);
    std::string head(tempograph::cache_magic.size(), '\0');
    in.read(head.data(), static_cast<std::streamsize>(head.size()));
    if (head == tempograph::cache_magic) {
        auto g = tempograph::load_cache(p);
        return {tempograph::manifest_for(g, p.stem().string()), g};
    }
    auto m = tempograph::read_manifest(p);
    auto g = tempograph::load_dataset(m);
    return {m, g};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::string join(const Json& combo) {
    std::string s;
    for (const auto& v : combo) {
        if (!s.empty()) s += '|';
        s += v.get<std::string>();
    }
    return s;
}

std::string interval_tsv(const Json& iv) {
    return std::to_string(iv[0].get<std::uint64_t>()) + "\t" + std::to_string(iv[1].get<std::uint64_t>());
}

// TSV renderings of the JSON bodies; combos are joined with '|'.
std::string stats_tsv(const Json& rows) {
    std::string out = "t\tnodes\tedges\n";
    for (const auto& r : rows)
        out += std::to_string(r["t"].get<std::uint64_t>()) + "\t" + std::to_string(r["nodes"].get<std::uint64_t>()) +
               "\t" + std::to_string(r["edges"].get<std::uint64_t>()) + "\n";
    return out;
}

std::string overview_tsv(const Json& body) {
    std::string out = "kind\ta\tb\n";
    for (const auto& n : body["nodes"])
        out += "node\t" + n["id"].get<std::string>() + "\t" + n["value"].get<std::string>() + "\n";
    for (const auto& e : body["edges"])
        out += "edge\t" + e[0].get<std::string>() + "\t" + e[1].get<std::string>() + "\n";
    out += "stats\t" + std::to_string(body["stats"]["nodes"].get<std::uint64_t>()) + "\t" +
           std::to_string(body["stats"]["values"].get<std::uint64_t>()) + "\n";
    return out;
}

std::string aggregate_tsv(const Json& body, const std::string& prefix = "") {
    if (body.contains("stability")) {
        std::string out;
        for (const char* k : {"stability", "growth", "shrinkage"}) out += aggregate_tsv(body[k], std::string(k) + "\t");
        return out;
    }
    std::string out;
    for (const auto& n : body["nodes"])
        out += prefix + "node\t" + join(n["combo"]) + "\t\t" + std::to_string(n["weight"].get<std::uint64_t>()) + "\n";
    for (const auto& e : body["edges"])
        out += prefix + "edge\t" + join(e["source"]) + "\t" + join(e["target"]) + "\t" +
               std::to_string(e["weight"].get<std::uint64_t>()) + "\n";
    return out;
}

std::string skyline_tsv(const Json& body) {
    std::string out = "set\tt_r\tstart\tend\tcount\tdod\n";
    for (const char* set : {"skyline", "top_k"})
        for (const auto& e : body[set])
            out += std::string(set) + "\t" + std::to_string(e["t_r"].get<std::uint64_t>()) + "\t" +
                   interval_tsv(e["interval"]) + "\t" + std::to_string(e["count"].get<std::uint64_t>()) + "\t" +
                   std::to_string(e["dod"].get<std::uint64_t>()) + "\n";
    return out;
}

std::string threshold_tsv(const Json& body) {
    std::string out = "t_r\tstart\tend\tcount\n";
    for (const auto& h : body["hits"])
        out += std::to_string(h["t_r"].get<std::uint64_t>()) + "\t" + interval_tsv(h["interval"]) + "\t" +
               std::to_string(h["count"].get<std::uint64_t>()) + "\n";
    return out;
}

struct Common {
    std::string dataset;
    std::string output = "json";
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--dataset,-d", c.dataset, "manifest.json, dataset directory, or .tgc cache")->required();
    cmd->add_option("--output,-o", c.output, "output format")->check(CLI::IsMember({"json", "tsv"}));
}

void emit(const Common& c, const Json& body, std::string (*tsv)(const Json&)) {
    if (c.output == "tsv") std::cout << tsv(body);
    else std::cout << body.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Temporal attributed graph explorer"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "validate a dataset and write a cache");
    std::string manifest_path, cache_out;
    ingest->add_option("--manifest,-m", manifest_path, "dataset manifest.json")->required();
    ingest->add_option("--out", cache_out, "cache file to write");

    // stats
    Common stats_opts;
    auto* stats = app.add_subcommand("stats", "per-instant node and edge counts");
    add_common(stats, stats_opts);

    // overview
    Common ov_opts;
    tempograph::api::OverviewRequest ov;
    auto* overview = app.add_subcommand("overview", "largest component of one snapshot");
    add_common(overview, ov_opts);
    overview->add_option("--t", ov.t, "time point")->required();
    overview->add_option("--attr", ov.attribute, "attribute to report")->required();
    overview->add_option("--limit", ov.limit, "sampling threshold");
    overview->add_option("--seed", ov.seed, "sampling seed");

    // aggregate
    Common agg_opts;
    std::string op, mode = "distinct", agg_semantics, attrs_csv;
    std::vector<std::string> interval_args;
    std::uint64_t reference = 0;
    auto* aggregate = app.add_subcommand("aggregate", "attribute aggregation of an operator result");
    add_common(aggregate, agg_opts);
    aggregate->add_option("--operator", op, "snapshot|project|flatten|union|intersection|difference|stability|growth|shrinkage|evolution")
        ->required();
    aggregate->add_option("--interval", interval_args, "start,end (repeatable)")->required();
    aggregate->add_option("--attrs", attrs_csv, "comma-separated attributes")->required();
    aggregate->add_option("--mode", mode, "distinct|non-distinct");
    aggregate->add_option("--semantics", agg_semantics, "strict|loose");
    aggregate->add_option("--reference", reference, "reference point for event operators");

    // explore
    auto* explore = app.add_subcommand("explore", "skyline or threshold exploration");
    explore->require_subcommand(1);
    Common ex_opts;
    std::string event, ex_semantics, ex_attrs, combo, source, target;
    std::uint64_t top_k = tempograph::api::default_top_k, k = 0;
    unsigned threads = 1;
    auto add_explore = [&](CLI::App* cmd) {
        add_common(cmd, ex_opts);
        cmd->add_option("--event", event, "stability|growth|shrinkage")->required();
        cmd->add_option("--semantics", ex_semantics, "strict|loose (default per event)");
        cmd->add_option("--attrs", ex_attrs, "comma-separated attributes")->required();
        auto* c = cmd->add_option("--combo", combo, "source,target combos; values within a combo joined by '|'");
        auto* s = cmd->add_option("--source", source, "source combo, values joined by '|'")->excludes(c);
        auto* t = cmd->add_option("--target", target, "target combo, values joined by '|'")->excludes(c);
        s->needs(t);
        t->needs(s);
        cmd->add_option("--threads", threads, "worker threads for candidate counting");
    };
    auto* sky = explore->add_subcommand("skyline", "evolution skyline with domination degrees");
    add_explore(sky);
    sky->add_option("--top-k", top_k, "number of ranked results");
    auto* thr = explore->add_subcommand("threshold", "extremal intervals with at least k events");
    add_explore(thr);
    thr->add_option("--k", k, "event threshold")->required();

    // serve
    tempograph::ServerConfig server_cfg;
    server_cfg.apply_env();
    std::string listen;
    auto* serve = app.add_subcommand("serve", "run the HTTP service");
    serve->add_option("--listen", listen, "host:port");
    serve->add_option("--preload", server_cfg.preload_dir, "directory of datasets to load at startup");
    serve->add_option("--sample-limit", server_cfg.sample_limit, "default overview sampling threshold");
    serve->add_option("--ui-dir", server_cfg.ui_dir, "static web client to serve at /");
    serve->add_option("--threads", server_cfg.explore_threads, "worker threads for exploration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*ingest) {
            auto m = tempograph::read_manifest(manifest_path);
            auto g = tempograph::load_dataset(m);
            if (!cache_out.empty()) tempograph::save_cache(g, cache_out);
            Json summary{{"name", m.name}, {"instants", g.domain().size}, {"nodes", g.nodes().size()},
                         {"edges", g.edges().size()}};
            if (!cache_out.empty()) summary["cache"] = cache_out;
            std::cout << summary.dump() << "\n";
        } else if (*stats) {
            emit(stats_opts, tempograph::api::stats(load(stats_opts.dataset).graph), stats_tsv);
        } else if (*overview) {
            emit(ov_opts, tempograph::api::overview(load(ov_opts.dataset).graph, ov), overview_tsv);
        } else if (*aggregate) {
            nlohmann::json body{{"operator", op}, {"attributes", split(attrs_csv, ',')}, {"mode", mode}};
            body["intervals"] = nlohmann::json::array();
            for (const auto& iv : interval_args) {
                auto parts = split(iv, ',');
                if (parts.size() == 1) parts.push_back(parts[0]);
                if (parts.size() != 2) throw CLI::ValidationError("--interval", "expected start,end");
                try {
                    body["intervals"].push_back({std::stoll(parts[0]), std::stoll(parts[1])});
                } catch (const std::logic_error&) {
                    throw CLI::ValidationError("--interval", "expected integers");
                }
            }
            if (!agg_semantics.empty()) body["semantics"] = agg_semantics;
            if (reference != 0) body["reference"] = reference;
            emit(agg_opts, tempograph::api::aggregate(load(agg_opts.dataset).graph, body),
                 [](const Json& j) { return aggregate_tsv(j); });
        } else if (*explore) {
            if (combo.empty() && source.empty()) throw CLI::RequiredError("--combo or --source/--target");
            if (!combo.empty()) {
                auto parts = split(combo, ',');
                if (parts.size() != 2) throw CLI::ValidationError("--combo", "expected source,target");
                source = parts[0];
                target = parts[1];
            }
            nlohmann::json body{{"event", event},
                                {"attributes", split(ex_attrs, ',')},
                                {"source_combo", split(source, '|')},
                                {"target_combo", split(target, '|')}};
            if (!ex_semantics.empty()) body["semantics"] = ex_semantics;
            const auto g = load(ex_opts.dataset).graph;
            const tempograph::ExploreOptions opts{threads};
            if (*sky) {
                body["top_k"] = top_k;
                emit(ex_opts, tempograph::api::explore_skyline(g, body, opts), skyline_tsv);
            } else {
                body["k"] = k;
                emit(ex_opts, tempograph::api::explore_threshold(g, body, opts), threshold_tsv);
            }
        } else if (*serve) {
            if (!listen.empty()) server_cfg.set_listen(listen);
            tempograph::api::DatasetRegistry registry;
            for (const auto& id : tempograph::preload_datasets(registry, server_cfg.preload_dir))
                std::cerr << "loaded dataset " << id << "\n";
            tempograph::ApiServer server(registry, server_cfg);
            std::cerr << "listening on " << server_cfg.host << ":" << server_cfg.port << "\n";
            if (!server.listen()) {
                std::cerr << "error: cannot listen on " << server_cfg.host << ":" << server_cfg.port << "\n";
                return 1;
            }
        }
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const tempograph::Error& e) {
        std::cerr << "error: " << tempograph::to_string(tempograph::api_code(e.code())) << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
