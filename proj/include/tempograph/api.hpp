#pragma once

// JSON request/response layer shared by the HTTP service and the CLI. Every
// function takes parsed inputs and returns the exact response document, so
// both front ends emit identical bodies.

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "tempograph/aggregation.hpp"
#include "tempograph/error.hpp"
#include "tempograph/exploration.hpp"
#include "tempograph/graph.hpp"
#include "tempograph/ingestion.hpp"
#include "tempograph/ops.hpp"
#include "tempograph/overview.hpp"

namespace tempograph::api {

using Json = nlohmann::ordered_json;

inline constexpr std::size_t default_top_k = 3;

struct Dataset {
    std::string id;
    DatasetManifest manifest;
    TemporalGraph graph;
};

// Registry of loaded datasets. Registration publishes a fully built dataset
// under a unique lock, so readers never see a partial one.
class DatasetRegistry {
public:
    std::string add(DatasetManifest manifest, TemporalGraph graph) {
        std::unique_lock lock(mutex_);
        auto base = slug(manifest.name);
        auto id = base;
        for (int n = 2; datasets_.contains(id); ++n) id = base + "-" + std::to_string(n);
        datasets_.emplace(id, std::make_shared<const Dataset>(Dataset{id, std::move(manifest), std::move(graph)}));
        return id;
    }

    std::shared_ptr<const Dataset> get(const std::string& id) const {
        std::shared_lock lock(mutex_);
        auto it = datasets_.find(id);
        if (it == datasets_.end()) fail(ErrorCode::not_found, "unknown dataset '" + id + "'");
        return it->second;
    }

    std::vector<std::shared_ptr<const Dataset>> list() const {
        std::shared_lock lock(mutex_);
        std::vector<std::shared_ptr<const Dataset>> out;
        for (const auto& [_, d] : datasets_) out.push_back(d);
        return out;
    }

    static std::string slug(const std::string& name) {
        std::string s;
        for (unsigned char c : name) {
            if (std::isalnum(c)) s += static_cast<char>(std::tolower(c));
            else if (!s.empty() && s.back() != '-') s += '-';
        }
        while (!s.empty() && s.back() == '-') s.pop_back();
        return s.empty() ? "dataset" : s;
    }

private:
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<const Dataset>> datasets_;
};

inline int http_status(ErrorCode code) { return api_code(code) == ErrorCode::not_found ? 404 : 400; }

inline Json error_body(const Error& e) {
    return Json{{"code", to_string(api_code(e.code()))}, {"message", e.what()}};
}

// ---------------------------------------------------------------------------
// Request field helpers; malformed requests are contract errors.

namespace detail {

inline const nlohmann::json& field(const nlohmann::json& body, const char* key) {
    if (!body.is_object()) fail(ErrorCode::contract, "request body must be a JSON object");
    if (!body.contains(key)) fail(ErrorCode::contract, std::string("missing field '") + key + "'");
    return body.at(key);
}

inline std::string string_field(const nlohmann::json& body, const char* key) {
    const auto& v = field(body, key);
    if (!v.is_string()) fail(ErrorCode::contract, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

inline std::uint64_t uint_value(const nlohmann::json& v, const std::string& what) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        const auto x = v.get<std::int64_t>();
        if (x >= 0) return static_cast<std::uint64_t>(x);
    }
    fail(ErrorCode::contract, what + " must be a non-negative integer");
}

inline std::uint64_t uint_field(const nlohmann::json& body, const char* key, std::optional<std::uint64_t> fallback = {}) {
    if (fallback && body.is_object() && !body.contains(key)) return *fallback;
    return uint_value(field(body, key), std::string("field '") + key + "'");
}

inline std::vector<std::string> string_list(const nlohmann::json& body, const char* key) {
    const auto& v = field(body, key);
    if (!v.is_array()) fail(ErrorCode::contract, std::string("field '") + key + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& x : v) {
        if (!x.is_string()) fail(ErrorCode::contract, std::string("field '") + key + "' must be an array of strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

inline Interval interval_value(const nlohmann::json& v) {
    if (!v.is_array() || v.size() != 2)
        fail(ErrorCode::contract, "intervals must be [start,end] pairs of positive integers");
    const auto a = uint_value(v[0], "interval start");
    const auto b = uint_value(v[1], "interval end");
    if (a < 1 || b < 1 || a > UINT32_MAX || b > UINT32_MAX)
        fail(ErrorCode::contract, "interval bounds must be positive integers");
    Interval iv{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
    if (!iv.well_formed()) fail(ErrorCode::contract, "interval start " + std::to_string(a) + " exceeds end " + std::to_string(b));
    return iv;
}

inline std::vector<Interval> intervals(const nlohmann::json& body) {
    const auto& v = field(body, "intervals");
    if (!v.is_array()) fail(ErrorCode::contract, "field 'intervals' must be an array");
    std::vector<Interval> out;
    for (const auto& x : v) out.push_back(interval_value(x));
    return out;
}

inline Json interval_json(const Interval& iv) { return Json::array({iv.start.index, iv.end.index}); }

inline Json combo_json(const AttributeSchema& schema, const std::vector<std::string>& request_order,
                       const ValueCombination& schema_combo) {
    return to_request_order(schema, request_order, schema_combo);
}

inline Json aggregate_json(const AttributeSchema& schema, const std::vector<std::string>& attrs,
                           const AggregateGraph& agg) {
    Json nodes = Json::array(), edges = Json::array();
    for (const auto& n : agg.nodes) nodes.push_back({{"combo", combo_json(schema, attrs, n.combo)}, {"weight", n.weight}});
    for (const auto& e : agg.edges)
        edges.push_back({{"source", combo_json(schema, attrs, e.source)},
                         {"target", combo_json(schema, attrs, e.target)},
                         {"weight", e.weight}});
    return Json{{"nodes", nodes}, {"edges", edges}};
}

inline void require_count(const std::vector<Interval>& ivs, std::size_t n, const std::string& op) {
    if (ivs.size() != n)
        fail(ErrorCode::contract, "operator '" + op + "' takes " + std::to_string(n) + " interval(s), got " +
                                      std::to_string(ivs.size()));
}

struct ExploreRequest {
    ExplorationQuery query;
    std::vector<std::string> request_attributes;
};

inline ExploreRequest explore_request(const TemporalGraph& g, const nlohmann::json& body) {
    ExploreRequest r;
    r.query.kind = parse_event_kind(string_field(body, "event"));
    r.query.semantics = body.contains("semantics") ? parse_semantics(string_field(body, "semantics"))
                                                   : default_semantics(r.query.kind);
    r.request_attributes = string_list(body, "attributes");
    r.query.attributes = r.request_attributes;
    r.query.source = to_schema_order(g.schema(), r.request_attributes, string_list(body, "source_combo"));
    r.query.target = to_schema_order(g.schema(), r.request_attributes, string_list(body, "target_combo"));
    return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Endpoint bodies.

inline Json dataset_json(const Dataset& d) {
    Json j{{"id", d.id}};
    j["manifest"] = manifest_to_json(d.manifest);
    j["instants"] = d.graph.domain().size;
    j["nodes"] = d.graph.nodes().size();
    j["edges"] = d.graph.edges().size();
    return j;
}

inline Json list_datasets(const DatasetRegistry& registry) {
    Json out = Json::array();
    for (const auto& d : registry.list()) out.push_back(dataset_json(*d));
    return out;
}

inline Json stats(const TemporalGraph& g) {
    Json rows = Json::array();
    for (const auto& r : per_time_stats(g)) {
        Json row{{"t", r.t.index}, {"nodes", r.nodes}, {"edges", r.edges}};
        if (!g.domain().labels.empty()) row["label"] = g.domain().labels[r.t.index - 1];
        rows.push_back(row);
    }
    return rows;
}

struct OverviewRequest {
    std::uint64_t t = 0;
    std::string attribute;
    std::uint64_t limit = default_sample_limit;
    std::uint64_t seed = 0;
};

inline Json overview(const TemporalGraph& g, const OverviewRequest& req) {
    g.schema().require(req.attribute);
    if (req.t < 1 || req.t > UINT32_MAX)
        fail(ErrorCode::domain, "time point " + std::to_string(req.t) + " outside domain [1," +
                                    std::to_string(g.domain().size) + "]");
    const auto payload = tempograph::overview(g, TimePoint{static_cast<std::uint32_t>(req.t)}, req.attribute,
                                              static_cast<std::size_t>(req.limit), req.seed);
    Json nodes = Json::array(), edges = Json::array();
    for (const auto& n : payload.nodes) nodes.push_back({{"id", n.id}, {"value", n.value}});
    for (const auto& [a, b] : payload.edges) edges.push_back(Json::array({a, b}));
    return Json{{"nodes", nodes},
                {"edges", edges},
                {"stats", {{"nodes", payload.node_count}, {"values", payload.value_count}}}};
}

// Body: {operator, intervals, attributes, mode?, semantics?, reference?}.
// Operators: snapshot, project, flatten (1 interval); union, intersection,
// difference (2 intervals); stability, growth, shrinkage, evolution
// (reference point plus 1 past interval).
inline Json aggregate(const TemporalGraph& g, const nlohmann::json& body) {
    const auto op = detail::string_field(body, "operator");
    const auto ivs = detail::intervals(body);
    const auto attrs = detail::string_list(body, "attributes");
    const auto mode = body.contains("mode") ? parse_aggregation_mode(detail::string_field(body, "mode"))
                                            : AggregationMode::distinct;
    [[maybe_unused]] const AttributeSelection selection(g.schema(), attrs);

    auto agg = [&](const GraphView& v) { return detail::aggregate_json(g.schema(), attrs, tempograph::aggregate(v, attrs, mode)); };

    if (op == "snapshot") {
        detail::require_count(ivs, 1, op);
        if (ivs[0].start != ivs[0].end) fail(ErrorCode::contract, "snapshot takes a single-instant interval");
        return agg(snapshot(g, ivs[0].start));
    }
    if (op == "project") {
        detail::require_count(ivs, 1, op);
        return agg(flatten(project(g, ivs[0]), ivs[0], Semantics::loose));
    }
    if (op == "flatten") {
        detail::require_count(ivs, 1, op);
        const auto s = body.contains("semantics") ? parse_semantics(detail::string_field(body, "semantics"))
                                                  : Semantics::loose;
        return agg(flatten(g, ivs[0], s));
    }
    if (op == "union" || op == "intersection" || op == "difference") {
        detail::require_count(ivs, 2, op);
        if (op == "union") return agg(union_of(g, ivs[0], ivs[1]));
        if (op == "intersection") return agg(intersection(g, ivs[0], ivs[1]));
        return agg(difference(g, ivs[0], ivs[1]));
    }
    if (op == "stability" || op == "growth" || op == "shrinkage" || op == "evolution") {
        detail::require_count(ivs, 1, op);
        const auto ref = detail::uint_field(body, "reference");
        if (ref < 1 || ref > UINT32_MAX) fail(ErrorCode::domain, "reference point outside domain");
        const TimePoint t_r{static_cast<std::uint32_t>(ref)};
        if (op == "evolution") {
            const auto s = body.contains("semantics") ? parse_semantics(detail::string_field(body, "semantics"))
                                                      : Semantics::loose;
            const auto ev = evolution(g, t_r, ivs[0], s);
            return Json{{"stability", agg(ev.stability)}, {"growth", agg(ev.growth)}, {"shrinkage", agg(ev.shrinkage)}};
        }
        const auto kind = parse_event_kind(op);
        const auto s = body.contains("semantics") ? parse_semantics(detail::string_field(body, "semantics"))
                                                  : default_semantics(kind);
        return agg(event_graph(g, kind, t_r, ivs[0], s));
    }
    fail(ErrorCode::contract, "unknown operator '" + op + "'");
}

inline Json tuple_json(const CandidateTuple& c) {
    return Json{{"t_r", c.t_r.index}, {"interval", detail::interval_json(c.T_r)}, {"count", c.w}};
}

// Body: {event, semantics?, attributes, source_combo, target_combo, top_k?}.
inline Json explore_skyline(const TemporalGraph& g, const nlohmann::json& body, ExploreOptions opts = {}) {
    const auto req = detail::explore_request(g, body);
    const auto top_k = detail::uint_field(body, "top_k", default_top_k);
    if (top_k < 1) fail(ErrorCode::contract, "top_k must be at least 1");
    const auto result = skyline(g, req.query, static_cast<std::size_t>(top_k), opts);
    auto entries = [](const std::vector<SkylineEntry>& v) {
        Json out = Json::array();
        for (const auto& e : v) {
            auto j = tuple_json(e.tuple);
            j["dod"] = e.dod;
            out.push_back(j);
        }
        return out;
    };
    return Json{{"skyline", entries(result.skyline)}, {"top_k", entries(result.top_k)}};
}

// Body: {event, semantics?, attributes, source_combo, target_combo, k}.
inline Json explore_threshold(const TemporalGraph& g, const nlohmann::json& body, ExploreOptions opts = {}) {
    const auto req = detail::explore_request(g, body);
    const auto k = detail::uint_field(body, "k");
    if (k < 1) fail(ErrorCode::contract, "threshold k must be at least 1");
    const auto result = threshold_search(g, req.query, k, opts);
    Json hits = Json::array();
    for (const auto& h : result.hits) hits.push_back(tuple_json(h));
    return Json{{"hits", hits}};
}

// Upload body as JSON: {manifest: {...}, nodes: "...", edges: "...",
// presence?: "...", node_values?: "..."} with file contents inline.
inline std::string register_upload(DatasetRegistry& registry, const nlohmann::json& manifest_json,
                                   const DatasetSources& sources) {
    auto manifest = parse_manifest(manifest_json);
    auto graph = load_dataset(manifest, sources);
    return registry.add(std::move(manifest), std::move(graph));
}

}  // namespace tempograph::api
