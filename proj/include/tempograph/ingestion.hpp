#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tempograph/error.hpp"
#include "tempograph/graph.hpp"

namespace tempograph {

inline constexpr std::string_view cache_magic = "TEMPOGRAPH-CACHE";
inline constexpr std::string_view cache_version = "v1";

enum class DatasetFormat { snapshot_tsv, contact_list };

struct DatasetFiles {
    std::string nodes;
    std::string edges;
    std::string presence;     // optional: id<TAB>t rows
    std::string node_values;  // optional: id<TAB>t<TAB>attr<TAB>value rows
};

struct DatasetManifest {
    std::string name;
    Directedness directedness = Directedness::undirected;
    bool self_loops = false;
    DatasetFormat format = DatasetFormat::snapshot_tsv;
    std::vector<Attribute> attributes;
    DatasetFiles files;
    std::optional<std::uint32_t> instants;  // domain size; inferred when absent
    std::int64_t bin_width = 0;             // contact-list only, source time units
    std::vector<std::string> time_labels;
    std::filesystem::path base_dir;          // files resolve relative to this
};

// File contents keyed like DatasetFiles; absent optional files stay empty.
struct DatasetSources {
    std::string nodes;
    std::string edges;
    std::optional<std::string> presence;
    std::optional<std::string> node_values;
};

namespace detail {

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) fail(ErrorCode::not_found, "cannot open '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Line {
    std::size_t number;
    std::vector<std::string_view> fields;
};

// Splits on LF and TAB; blank lines are skipped, a trailing CR is dropped.
inline std::vector<Line> tsv_lines(std::string_view text) {
    std::vector<Line> out;
    std::size_t number = 0, pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        auto line = text.substr(pos, eol - pos);
        ++number;
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) {
            if (eol == text.size()) break;
            continue;
        }
        Line l{number, {}};
        std::size_t start = 0;
        while (true) {
            auto tab = line.find('\t', start);
            l.fields.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
            if (tab == std::string_view::npos) break;
            start = tab + 1;
        }
        out.push_back(std::move(l));
        if (eol == text.size()) break;
    }
    return out;
}

[[noreturn]] inline void parse_fail(std::string_view file, std::size_t line, const std::string& what) {
    fail(ErrorCode::parse, std::string(file) + ":" + std::to_string(line) + ": " + what);
}

template <typename Int>
Int parse_int(std::string_view file, const Line& l, std::string_view field) {
    Int v{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
        parse_fail(file, l.number, "expected an integer, got '" + std::string(field) + "'");
    return v;
}

inline std::uint32_t parse_instant(std::string_view file, const Line& l, std::string_view field) {
    const auto t = parse_int<std::int64_t>(file, l, field);
    if (t < 1 || t > UINT32_MAX) parse_fail(file, l.number, "time point must be a positive integer, got " + std::string(field));
    return static_cast<std::uint32_t>(t);
}

inline void expect_fields(std::string_view file, const Line& l, std::size_t n) {
    if (l.fields.size() != n)
        parse_fail(file, l.number, "expected " + std::to_string(n) + " tab-separated fields, got " +
                                       std::to_string(l.fields.size()));
}

inline bool is_header(const Line& l, std::initializer_list<std::string_view> names) {
    for (auto n : names)
        if (!l.fields.empty() && l.fields[0] == n) return true;
    return false;
}

struct NodeTable {
    std::vector<std::string> ids;
    std::vector<std::map<std::string, std::string>> static_values;
};

inline NodeTable parse_nodes(const DatasetManifest& m, std::string_view text) {
    const auto lines = tsv_lines(text);
    if (lines.empty()) parse_fail("nodes", 1, "missing header row");
    const auto& header = lines.front();
    if (header.fields.empty() || header.fields[0] != "id") parse_fail("nodes", header.number, "header must start with 'id'");

    std::set<std::string> declared_static;
    for (const auto& a : m.attributes)
        if (a.kind == AttributeKind::static_value) declared_static.insert(a.name);
    std::vector<std::string> columns;
    for (std::size_t i = 1; i < header.fields.size(); ++i) {
        std::string col(header.fields[i]);
        if (!declared_static.contains(col))
            fail(ErrorCode::schema, "nodes header column '" + col + "' is not a declared static attribute");
        columns.push_back(std::move(col));
    }
    if (std::set<std::string>(columns.begin(), columns.end()) != declared_static)
        fail(ErrorCode::schema, "nodes header must list every static attribute exactly once");

    NodeTable table;
    std::set<std::string> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& l = lines[i];
        expect_fields("nodes", l, header.fields.size());
        std::string id(l.fields[0]);
        if (id.empty()) parse_fail("nodes", l.number, "empty node id");
        if (!seen.insert(id).second) parse_fail("nodes", l.number, "duplicate node id '" + id + "'");
        std::map<std::string, std::string> values;
        for (std::size_t c = 0; c < columns.size(); ++c) values[columns[c]] = std::string(l.fields[c + 1]);
        table.ids.push_back(std::move(id));
        table.static_values.push_back(std::move(values));
    }
    return table;
}

inline void check_domain(const DatasetManifest& m, std::uint32_t max_seen, std::uint32_t& size) {
    if (m.instants) {
        if (max_seen > *m.instants)
            fail(ErrorCode::domain, "time point " + std::to_string(max_seen) + " exceeds declared domain of " +
                                        std::to_string(*m.instants) + " instants");
        size = *m.instants;
    } else if (!m.time_labels.empty()) {
        if (max_seen > m.time_labels.size())
            fail(ErrorCode::domain, "time point " + std::to_string(max_seen) + " exceeds the " +
                                        std::to_string(m.time_labels.size()) + " declared time labels");
        size = static_cast<std::uint32_t>(m.time_labels.size());
    } else {
        size = max_seen;
    }
    if (size == 0) fail(ErrorCode::domain, "empty time domain");
}

// Shared tail of both loaders: node validity is edge participation plus
// explicit presence; nodes never present are dropped.
inline TemporalGraph assemble(const DatasetManifest& m, const NodeTable& table,
                              const std::map<std::pair<std::string, std::string>, TimeSet>& edges,
                              std::map<std::string, TimeSet> validity,
                              const std::map<std::string, std::map<std::string, std::map<std::uint32_t, std::string>>>& varying,
                              std::uint32_t domain_size) {
    for (const auto& [pair, v] : edges) {
        validity[pair.first] |= v;
        validity[pair.second] |= v;
    }
    AttributeSchema schema(m.attributes);
    GraphBuilder builder(schema, TimeDomain{domain_size, m.time_labels}, m.directedness, m.self_loops);
    for (std::size_t i = 0; i < table.ids.size(); ++i) {
        auto it = validity.find(table.ids[i]);
        if (it == validity.end() || it->second.empty()) continue;
        auto vit = varying.find(table.ids[i]);
        builder.add_node(table.ids[i], it->second, table.static_values[i],
                         vit == varying.end() ? decltype(vit->second){} : vit->second);
    }
    for (const auto& [pair, v] : edges) builder.add_edge(pair.first, pair.second, v);
    return builder.build();
}

}  // namespace detail

inline DatasetManifest parse_manifest(const nlohmann::json& j, std::filesystem::path base_dir = {}) {
    try {
        DatasetManifest m;
        m.name = j.at("name").get<std::string>();
        m.directedness = j.value("directed", false) ? Directedness::directed : Directedness::undirected;
        m.self_loops = j.value("self_loops", false);
        const auto format = j.value("format", std::string("snapshot-tsv"));
        if (format == "snapshot-tsv") m.format = DatasetFormat::snapshot_tsv;
        else if (format == "contact-list") m.format = DatasetFormat::contact_list;
        else fail(ErrorCode::parse, "manifest: unknown format '" + format + "'");
        for (const auto& a : j.at("attributes")) {
            Attribute attr;
            attr.name = a.at("name").get<std::string>();
            const auto kind = a.value("kind", std::string("static"));
            if (kind == "static") attr.kind = AttributeKind::static_value;
            else if (kind == "time-varying") attr.kind = AttributeKind::time_varying;
            else fail(ErrorCode::parse, "manifest: unknown attribute kind '" + kind + "'");
            attr.values = a.at("values").get<std::vector<std::string>>();
            m.attributes.push_back(std::move(attr));
        }
        const auto files = j.value("files", nlohmann::json::object());
        m.files.nodes = files.value("nodes", std::string("nodes.tsv"));
        m.files.edges = files.value("edges", std::string("edges.tsv"));
        m.files.presence = files.value("presence", std::string());
        m.files.node_values = files.value("node_values", std::string());
        if (j.contains("instants")) m.instants = j.at("instants").get<std::uint32_t>();
        m.bin_width = j.value("bin_width", std::int64_t{0});
        if (j.contains("time_labels")) m.time_labels = j.at("time_labels").get<std::vector<std::string>>();
        if (m.format == DatasetFormat::contact_list && m.bin_width <= 0)
            fail(ErrorCode::parse, "manifest: contact-list datasets need a positive bin_width");
        m.base_dir = std::move(base_dir);
        AttributeSchema check(m.attributes);
        return m;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::parse, std::string("manifest: ") + e.what());
    }
}

inline nlohmann::ordered_json manifest_to_json(const DatasetManifest& m) {
    nlohmann::ordered_json j;
    j["name"] = m.name;
    j["directed"] = m.directedness == Directedness::directed;
    j["self_loops"] = m.self_loops;
    j["format"] = m.format == DatasetFormat::snapshot_tsv ? "snapshot-tsv" : "contact-list";
    j["attributes"] = nlohmann::ordered_json::array();
    for (const auto& a : m.attributes)
        j["attributes"].push_back({{"name", a.name},
                                   {"kind", a.kind == AttributeKind::static_value ? "static" : "time-varying"},
                                   {"values", a.values}});
    nlohmann::ordered_json files{{"nodes", m.files.nodes}, {"edges", m.files.edges}};
    if (!m.files.presence.empty()) files["presence"] = m.files.presence;
    if (!m.files.node_values.empty()) files["node_values"] = m.files.node_values;
    j["files"] = files;
    if (m.instants) j["instants"] = *m.instants;
    if (m.format == DatasetFormat::contact_list) j["bin_width"] = m.bin_width;
    if (!m.time_labels.empty()) j["time_labels"] = m.time_labels;
    return j;
}

inline DatasetManifest read_manifest(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(detail::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::parse, path.string() + ": " + e.what());
    }
    return parse_manifest(j, path.parent_path());
}

// Reads every file the manifest references; missing files are errors.
inline DatasetSources read_sources(const DatasetManifest& m) {
    auto path = [&](const std::string& f) { return m.base_dir / f; };
    DatasetSources s;
    s.nodes = detail::read_file(path(m.files.nodes));
    s.edges = detail::read_file(path(m.files.edges));
    if (!m.files.presence.empty()) s.presence = detail::read_file(path(m.files.presence));
    if (!m.files.node_values.empty()) s.node_values = detail::read_file(path(m.files.node_values));
    return s;
}

// nodes: header `id<TAB>static attrs...`; edges: `src<TAB>dst<TAB>t`;
// presence: `id<TAB>t`; node_values: `id<TAB>t<TAB>attr<TAB>value`.
// Header rows on the last three are optional.
inline TemporalGraph load_snapshot_tsv(const DatasetManifest& m, const DatasetSources& src) {
    const auto table = detail::parse_nodes(m, src.nodes);
    const std::set<std::string> known(table.ids.begin(), table.ids.end());
    const AttributeSchema schema(m.attributes);
    std::uint32_t max_seen = 0;

    std::map<std::pair<std::string, std::string>, TimeSet> edges;
    for (const auto& l : detail::tsv_lines(src.edges)) {
        if (l.number == 1 && detail::is_header(l, {"src", "source"})) continue;
        detail::expect_fields("edges", l, 3);
        std::string a(l.fields[0]), b(l.fields[1]);
        const auto t = detail::parse_instant("edges", l, l.fields[2]);
        for (const auto& id : {a, b})
            if (!known.contains(id))
                fail(ErrorCode::referential, "edges:" + std::to_string(l.number) + ": unknown node '" + id + "'");
        if (m.directedness == Directedness::undirected && b < a) std::swap(a, b);
        edges[{std::move(a), std::move(b)}].insert(TimePoint{t});
        max_seen = std::max(max_seen, t);
    }

    std::map<std::string, TimeSet> validity;
    if (src.presence) {
        for (const auto& l : detail::tsv_lines(*src.presence)) {
            if (l.number == 1 && detail::is_header(l, {"id"})) continue;
            detail::expect_fields("presence", l, 2);
            std::string id(l.fields[0]);
            if (!known.contains(id))
                fail(ErrorCode::referential, "presence:" + std::to_string(l.number) + ": unknown node '" + id + "'");
            const auto t = detail::parse_instant("presence", l, l.fields[1]);
            validity[id].insert(TimePoint{t});
            max_seen = std::max(max_seen, t);
        }
    }

    std::map<std::string, std::map<std::string, std::map<std::uint32_t, std::string>>> varying;
    if (src.node_values) {
        for (const auto& l : detail::tsv_lines(*src.node_values)) {
            if (l.number == 1 && detail::is_header(l, {"id"})) continue;
            detail::expect_fields("node_values", l, 4);
            std::string id(l.fields[0]);
            if (!known.contains(id))
                fail(ErrorCode::referential, "node_values:" + std::to_string(l.number) + ": unknown node '" + id + "'");
            const auto t = detail::parse_instant("node_values", l, l.fields[1]);
            const auto a = schema.require(l.fields[2]);
            if (schema[a].kind != AttributeKind::time_varying)
                fail(ErrorCode::schema, "node_values:" + std::to_string(l.number) + ": attribute '" +
                                            schema[a].name + "' is static");
            varying[id][schema[a].name][t] = std::string(l.fields[3]);
            max_seen = std::max(max_seen, t);
        }
    }

    std::uint32_t size = 0;
    detail::check_domain(m, max_seen, size);
    return detail::assemble(m, table, edges, std::move(validity), varying, size);
}

// Contact rows `t<TAB>i<TAB>j` with raw, non-decreasing, non-negative
// timestamps; instant = floor((t - t_min) / bin_width) + 1.
inline TemporalGraph load_contact_list(const DatasetManifest& m, const DatasetSources& src) {
    if (m.bin_width <= 0) fail(ErrorCode::parse, "contact-list needs a positive bin_width");
    const auto table = detail::parse_nodes(m, src.nodes);
    const std::set<std::string> known(table.ids.begin(), table.ids.end());

    struct Contact {
        std::int64_t t;
        std::string a, b;
    };
    std::vector<Contact> contacts;
    for (const auto& l : detail::tsv_lines(src.edges)) {
        if (l.number == 1 && detail::is_header(l, {"t", "time", "timestamp"})) continue;
        detail::expect_fields("contacts", l, 3);
        const auto t = detail::parse_int<std::int64_t>("contacts", l, l.fields[0]);
        if (t < 0) detail::parse_fail("contacts", l.number, "negative timestamp");
        if (!contacts.empty() && t < contacts.back().t)
            detail::parse_fail("contacts", l.number, "timestamps must be non-decreasing");
        std::string a(l.fields[1]), b(l.fields[2]);
        for (const auto& id : {a, b})
            if (!known.contains(id))
                fail(ErrorCode::referential, "contacts:" + std::to_string(l.number) + ": unknown node '" + id + "'");
        contacts.push_back({t, std::move(a), std::move(b)});
    }

    std::map<std::pair<std::string, std::string>, TimeSet> edges;
    std::uint32_t max_seen = 0;
    const auto t_min = contacts.empty() ? 0 : contacts.front().t;
    for (auto& c : contacts) {
        const auto bin = static_cast<std::uint32_t>((c.t - t_min) / m.bin_width + 1);
        if (m.directedness == Directedness::undirected && c.b < c.a) std::swap(c.a, c.b);
        edges[{c.a, c.b}].insert(TimePoint{bin});
        max_seen = std::max(max_seen, bin);
    }
    std::uint32_t size = 0;
    detail::check_domain(m, max_seen, size);
    return detail::assemble(m, table, edges, {}, {}, size);
}

inline TemporalGraph load_dataset(const DatasetManifest& m, const DatasetSources& src) {
    return m.format == DatasetFormat::snapshot_tsv ? load_snapshot_tsv(m, src) : load_contact_list(m, src);
}

inline TemporalGraph load_dataset(const DatasetManifest& m) { return load_dataset(m, read_sources(m)); }

// Serializes g in the snapshot-tsv layout; every node instant is listed in
// the presence file so isolated instants survive the round trip.
inline DatasetSources to_snapshot_tsv(const TemporalGraph& g) {
    const auto& schema = g.schema();
    DatasetSources out;
    out.nodes = "id";
    for (const auto& a : schema.attributes())
        if (a.kind == AttributeKind::static_value) out.nodes += "\t" + a.name;
    out.nodes += "\n";
    std::string presence = "id\tt\n", values = "id\tt\tattr\tvalue\n";
    bool any_varying = false;
    for (const auto& n : g.nodes()) {
        out.nodes += n.id;
        for (std::size_t a = 0; a < schema.size(); ++a) {
            if (schema[a].kind == AttributeKind::static_value) {
                out.nodes += "\t" + n.values[a].fixed;
                continue;
            }
            any_varying = true;
            for (const auto& [t, v] : n.values[a].by_time)
                values += n.id + "\t" + std::to_string(t) + "\t" + schema[a].name + "\t" + v + "\n";
        }
        out.nodes += "\n";
        for (auto t : n.validity.points()) presence += n.id + "\t" + std::to_string(t.index) + "\n";
    }
    out.edges = "src\tdst\tt\n";
    for (const auto& e : g.edges())
        for (auto t : e.validity.points())
            out.edges += g.node_id(e.source) + "\t" + g.node_id(e.target) + "\t" + std::to_string(t.index) + "\n";
    out.presence = std::move(presence);
    if (any_varying) out.node_values = std::move(values);
    return out;
}

inline DatasetManifest manifest_for(const TemporalGraph& g, std::string name) {
    DatasetManifest m;
    m.name = std::move(name);
    m.directedness = g.directedness();
    m.self_loops = g.allows_self_loops();
    m.attributes.assign(g.schema().attributes().begin(), g.schema().attributes().end());
    m.files = {"nodes.tsv", "edges.tsv", "presence.tsv", ""};
    for (const auto& a : m.attributes)
        if (a.kind == AttributeKind::time_varying) m.files.node_values = "node_values.tsv";
    m.instants = g.domain().size;
    m.time_labels = g.domain().labels;
    return m;
}

// Writes manifest.json plus the TSV files into dir.
inline DatasetManifest write_snapshot_tsv(const TemporalGraph& g, const std::string& name,
                                          const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto m = manifest_for(g, name);
    m.base_dir = dir;
    const auto src = to_snapshot_tsv(g);
    auto put = [&](const std::string& file, const std::string& text) {
        std::ofstream out(dir / file, std::ios::binary);
        out << text;
        if (!out) fail(ErrorCode::integrity, "cannot write '" + (dir / file).string() + "'");
    };
    put(m.files.nodes, src.nodes);
    put(m.files.edges, src.edges);
    put(m.files.presence, *src.presence);
    if (src.node_values) put(m.files.node_values, *src.node_values);
    put("manifest.json", manifest_to_json(m).dump(2) + "\n");
    return m;
}

// ---------------------------------------------------------------------------
// Canonical cache: magic line, checksum line, JSON body.

namespace detail {

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    return s;
}

}  // namespace detail

inline std::string serialize_cache(const TemporalGraph& g) {
    const auto& schema = g.schema();
    nlohmann::ordered_json body;
    body["directed"] = g.directed();
    body["self_loops"] = g.allows_self_loops();
    body["domain"] = {{"size", g.domain().size}, {"labels", g.domain().labels}};
    body["attributes"] = nlohmann::ordered_json::array();
    for (const auto& a : schema.attributes())
        body["attributes"].push_back({{"name", a.name},
                                      {"kind", a.kind == AttributeKind::static_value ? "static" : "time-varying"},
                                      {"values", a.values}});
    auto points = [](const TimeSet& s) {
        std::vector<std::uint32_t> out;
        for (auto t : s.points()) out.push_back(t.index);
        return out;
    };
    body["nodes"] = nlohmann::ordered_json::array();
    for (const auto& n : g.nodes()) {
        nlohmann::ordered_json values = nlohmann::ordered_json::object();
        for (std::size_t a = 0; a < schema.size(); ++a) {
            if (schema[a].kind == AttributeKind::static_value) {
                values[schema[a].name] = n.values[a].fixed;
            } else {
                nlohmann::ordered_json series = nlohmann::ordered_json::object();
                for (const auto& [t, v] : n.values[a].by_time) series[std::to_string(t)] = v;
                values[schema[a].name] = series;
            }
        }
        body["nodes"].push_back({{"id", n.id}, {"validity", points(n.validity)}, {"values", values}});
    }
    body["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : g.edges())
        body["edges"].push_back({g.node_id(e.source), g.node_id(e.target), points(e.validity)});

    const auto text = body.dump();
    return std::string(cache_magic) + " " + std::string(cache_version) + "\n" + "fnv1a64 " +
           detail::hex64(detail::fnv1a64(text)) + "\n" + text + "\n";
}

inline TemporalGraph deserialize_cache(std::string_view data) {
    auto take_line = [&](std::string_view& rest) {
        const auto eol = rest.find('\n');
        if (eol == std::string_view::npos) fail(ErrorCode::integrity, "cache truncated");
        auto line = rest.substr(0, eol);
        rest.remove_prefix(eol + 1);
        return line;
    };
    auto rest = data;
    const auto magic = take_line(rest);
    const std::string prefix = std::string(cache_magic) + " ";
    if (magic.substr(0, prefix.size()) != prefix) fail(ErrorCode::integrity, "not a tempograph cache");
    if (magic.substr(prefix.size()) != cache_version)
        fail(ErrorCode::incompatible, "cache version '" + std::string(magic.substr(prefix.size())) +
                                          "' is not supported (expected " + std::string(cache_version) + ")");
    const auto sum = take_line(rest);
    if (sum.substr(0, 8) != "fnv1a64 ") fail(ErrorCode::integrity, "cache checksum line missing");
    if (rest.empty() || rest.back() != '\n') fail(ErrorCode::integrity, "cache truncated");
    rest.remove_suffix(1);
    if (detail::hex64(detail::fnv1a64(rest)) != sum.substr(8)) fail(ErrorCode::integrity, "cache checksum mismatch");

    try {
        const auto body = nlohmann::json::parse(rest);
        std::vector<Attribute> attrs;
        for (const auto& a : body.at("attributes"))
            attrs.push_back({a.at("name").get<std::string>(),
                             a.at("kind").get<std::string>() == "static" ? AttributeKind::static_value
                                                                         : AttributeKind::time_varying,
                             a.at("values").get<std::vector<std::string>>()});
        AttributeSchema schema(std::move(attrs));
        TimeDomain domain{body.at("domain").at("size").get<std::uint32_t>(),
                          body.at("domain").at("labels").get<std::vector<std::string>>()};
        GraphBuilder builder(schema, domain,
                             body.at("directed").get<bool>() ? Directedness::directed : Directedness::undirected,
                             body.at("self_loops").get<bool>());
        auto to_set = [](const nlohmann::json& arr) {
            TimeSet s;
            for (const auto& t : arr) s.insert(TimePoint{t.get<std::uint32_t>()});
            return s;
        };
        for (const auto& n : body.at("nodes")) {
            std::map<std::string, std::string> fixed;
            std::map<std::string, std::map<std::uint32_t, std::string>> varying;
            for (const auto& [name, v] : n.at("values").items()) {
                if (v.is_string()) {
                    fixed[name] = v.get<std::string>();
                } else {
                    auto& series = varying[name];
                    for (const auto& [t, value] : v.items())
                        series[static_cast<std::uint32_t>(std::stoul(t))] = value.get<std::string>();
                }
            }
            builder.add_node(n.at("id").get<std::string>(), to_set(n.at("validity")), fixed, varying);
        }
        for (const auto& e : body.at("edges"))
            builder.add_edge(e.at(0).get<std::string>(), e.at(1).get<std::string>(), to_set(e.at(2)));
        return builder.build();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::integrity, std::string("cache body: ") + e.what());
    } catch (const std::logic_error& e) {
        fail(ErrorCode::integrity, std::string("cache body: ") + e.what());
    }
}

inline void save_cache(const TemporalGraph& g, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    out << serialize_cache(g);
    if (!out) fail(ErrorCode::integrity, "cannot write '" + path.string() + "'");
}

inline TemporalGraph load_cache(const std::filesystem::path& path) { return deserialize_cache(detail::read_file(path)); }

}  // namespace tempograph
