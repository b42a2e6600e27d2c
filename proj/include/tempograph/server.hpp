#pragma once

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>

#include "httplib.h"
#include "json.hpp"
#include "tempograph/api.hpp"

namespace tempograph {

struct ServerConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path preload_dir;
    std::size_t sample_limit = default_sample_limit;
    std::filesystem::path ui_dir;  // optional static files mounted at /
    unsigned explore_threads = 1;

    // TEMPOGRAPH_LISTEN=host:port, TEMPOGRAPH_PRELOAD, TEMPOGRAPH_SAMPLE_LIMIT.
    void apply_env() {
        if (const char* listen = std::getenv("TEMPOGRAPH_LISTEN")) set_listen(listen);
        if (const char* dir = std::getenv("TEMPOGRAPH_PRELOAD")) preload_dir = dir;
        if (const char* limit = std::getenv("TEMPOGRAPH_SAMPLE_LIMIT")) sample_limit = std::stoul(limit);
    }

    void set_listen(const std::string& listen) {
        const auto colon = listen.rfind(':');
        if (colon == std::string::npos) fail(ErrorCode::contract, "listen address must be host:port");
        host = listen.substr(0, colon);
        port = std::stoi(listen.substr(colon + 1));
    }
};

// Loads every dataset below dir: subdirectories holding manifest.json and
// cache files ending in .tgc. Returns the registered ids.
inline std::vector<std::string> preload_datasets(api::DatasetRegistry& registry, const std::filesystem::path& dir) {
    std::vector<std::string> ids;
    if (dir.empty()) return ids;
    std::vector<std::filesystem::path> entries;
    for (const auto& e : std::filesystem::directory_iterator(dir)) entries.push_back(e.path());
    std::sort(entries.begin(), entries.end());
    for (const auto& p : entries) {
        if (std::filesystem::is_directory(p) && std::filesystem::exists(p / "manifest.json")) {
            auto m = read_manifest(p / "manifest.json");
            auto g = load_dataset(m);
            ids.push_back(registry.add(std::move(m), std::move(g)));
        } else if (p.extension() == ".tgc") {
            auto g = load_cache(p);
            auto m = manifest_for(g, p.stem().string());
            ids.push_back(registry.add(std::move(m), std::move(g)));
        }
    }
    return ids;
}

class ApiServer {
public:
    ApiServer(api::DatasetRegistry& registry, ServerConfig config)
        : registry_(registry), config_(std::move(config)) {
        routes();
    }

    bool listen() { return http_.listen(config_.host, config_.port); }

    // Binds an ephemeral port; pair with listen_after_bind().
    int bind_any_port() { return http_.bind_to_any_port(config_.host); }
    bool listen_after_bind() { return http_.listen_after_bind(); }
    void stop() { http_.stop(); }
    void wait_until_ready() { http_.wait_until_ready(); }

private:
    using Handler = std::function<api::Json(const httplib::Request&)>;

    void respond(httplib::Response& res, const Handler& handler, const httplib::Request& req) {
        try {
            res.set_content(handler(req).dump(), "application/json");
            res.status = 200;
        } catch (const Error& e) {
            res.status = api::http_status(e.code());
            res.set_content(api::error_body(e).dump(), "application/json");
        } catch (const std::exception& e) {
            res.status = 500;
            res.set_content(api::error_body(Error(ErrorCode::contract, e.what())).dump(), "application/json");
        }
    }

    void get(const std::string& pattern, Handler handler) {
        http_.Get(pattern, [this, handler](const httplib::Request& req, httplib::Response& res) {
            respond(res, handler, req);
        });
    }

    void post(const std::string& pattern, Handler handler) {
        http_.Post(pattern, [this, handler](const httplib::Request& req, httplib::Response& res) {
            respond(res, handler, req);
        });
    }

    static nlohmann::json parse_body(const httplib::Request& req) {
        try {
            return nlohmann::json::parse(req.body);
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorCode::parse, std::string("request body: ") + e.what());
        }
    }

    static std::uint64_t query_uint(const httplib::Request& req, const char* key, std::optional<std::uint64_t> fallback) {
        if (!req.has_param(key)) {
            if (fallback) return *fallback;
            fail(ErrorCode::contract, std::string("missing query parameter '") + key + "'");
        }
        const auto text = req.get_param_value(key);
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
            fail(ErrorCode::contract, std::string("query parameter '") + key + "' must be a non-negative integer");
        return v;
    }

    std::shared_ptr<const api::Dataset> dataset(const httplib::Request& req) const {
        return registry_.get(req.matches[1].str());
    }

    api::Json upload(const httplib::Request& req) {
        nlohmann::json manifest;
        DatasetSources sources;
        if (req.is_multipart_form_data()) {
            auto part = [&](const char* name) -> std::optional<std::string> {
                if (!req.has_file(name)) return std::nullopt;
                return req.get_file_value(name).content;
            };
            auto required = [&](const char* name) {
                auto v = part(name);
                if (!v) fail(ErrorCode::contract, std::string("upload is missing part '") + name + "'");
                return *v;
            };
            try {
                manifest = nlohmann::json::parse(required("manifest"));
            } catch (const nlohmann::json::exception& e) {
                fail(ErrorCode::parse, std::string("manifest: ") + e.what());
            }
            sources.nodes = required("nodes");
            sources.edges = required("edges");
            sources.presence = part("presence");
            sources.node_values = part("node_values");
        } else {
            const auto body = parse_body(req);
            manifest = api::detail::field(body, "manifest");
            sources.nodes = api::detail::string_field(body, "nodes");
            sources.edges = api::detail::string_field(body, "edges");
            if (body.contains("presence")) sources.presence = api::detail::string_field(body, "presence");
            if (body.contains("node_values")) sources.node_values = api::detail::string_field(body, "node_values");
        }
        return api::Json{{"id", api::register_upload(registry_, manifest, sources)}};
    }

    void routes() {
        const ExploreOptions opts{config_.explore_threads};
        get("/api/datasets", [this](const httplib::Request&) { return api::list_datasets(registry_); });
        post("/api/datasets", [this](const httplib::Request& req) { return upload(req); });
        get(R"(/api/([^/]+)/stats)", [this](const httplib::Request& req) { return api::stats(dataset(req)->graph); });
        get(R"(/api/([^/]+)/overview)", [this](const httplib::Request& req) {
            const auto d = dataset(req);
            api::OverviewRequest o;
            o.t = query_uint(req, "t", std::nullopt);
            if (!req.has_param("attr")) fail(ErrorCode::contract, "missing query parameter 'attr'");
            o.attribute = req.get_param_value("attr");
            o.limit = query_uint(req, "limit", config_.sample_limit);
            o.seed = query_uint(req, "seed", 0);
            return api::overview(d->graph, o);
        });
        post(R"(/api/([^/]+)/aggregate)", [this](const httplib::Request& req) {
            const auto d = dataset(req);
            return api::aggregate(d->graph, parse_body(req));
        });
        post(R"(/api/([^/]+)/explore/skyline)", [this, opts](const httplib::Request& req) {
            const auto d = dataset(req);
            return api::explore_skyline(d->graph, parse_body(req), opts);
        });
        post(R"(/api/([^/]+)/explore/threshold)", [this, opts](const httplib::Request& req) {
            const auto d = dataset(req);
            return api::explore_threshold(d->graph, parse_body(req), opts);
        });
        if (!config_.ui_dir.empty()) http_.set_mount_point("/", config_.ui_dir.string());
    }

    api::DatasetRegistry& registry_;
    ServerConfig config_;
    httplib::Server http_;
};

}  // namespace tempograph
