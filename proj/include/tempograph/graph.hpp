#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tempograph/error.hpp"
#include "tempograph/time.hpp"

namespace tempograph {

enum class AttributeKind { static_value, time_varying };
enum class Directedness { undirected, directed };

struct Attribute {
    std::string name;
    AttributeKind kind = AttributeKind::static_value;
    std::vector<std::string> values;  // finite value domain, declaration order

    std::optional<std::uint32_t> code_of(std::string_view value) const {
        for (std::uint32_t i = 0; i < values.size(); ++i)
            if (values[i] == value) return i;
        return std::nullopt;
    }

    friend bool operator==(const Attribute&, const Attribute&) = default;
};

class AttributeSchema {
public:
    AttributeSchema() = default;
    explicit AttributeSchema(std::vector<Attribute> attributes) : attributes_(std::move(attributes)) {
        for (std::size_t i = 0; i < attributes_.size(); ++i) {
            const auto& a = attributes_[i];
            if (a.name.empty()) fail(ErrorCode::schema, "attribute name must not be empty");
            if (a.values.empty()) fail(ErrorCode::schema, "attribute '" + a.name + "' has an empty value domain");
            for (std::size_t j = 0; j < i; ++j)
                if (attributes_[j].name == a.name) fail(ErrorCode::schema, "duplicate attribute '" + a.name + "'");
            auto sorted = a.values;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                fail(ErrorCode::schema, "attribute '" + a.name + "' declares a value twice");
        }
    }

    std::span<const Attribute> attributes() const { return attributes_; }
    std::size_t size() const { return attributes_.size(); }
    const Attribute& operator[](std::size_t i) const { return attributes_[i]; }

    std::optional<std::size_t> index_of(std::string_view name) const {
        for (std::size_t i = 0; i < attributes_.size(); ++i)
            if (attributes_[i].name == name) return i;
        return std::nullopt;
    }

    std::size_t require(std::string_view name) const {
        if (auto i = index_of(name)) return *i;
        fail(ErrorCode::schema, "unknown attribute '" + std::string(name) + "'");
    }

    friend bool operator==(const AttributeSchema&, const AttributeSchema&) = default;

private:
    std::vector<Attribute> attributes_;
};

struct TimeDomain {
    std::uint32_t size = 0;
    std::vector<std::string> labels;  // empty, or one label per instant

    bool contains(TimePoint t) const { return t.index >= 1 && t.index <= size; }
    bool contains(const Interval& iv) const { return iv.well_formed() && contains(iv.start) && contains(iv.end); }
    Interval full() const { return {TimePoint{1}, TimePoint{size}}; }

    friend bool operator==(const TimeDomain&, const TimeDomain&) = default;
};

inline void require_in_domain(const TimeDomain& d, TimePoint t) {
    if (!d.contains(t))
        fail(ErrorCode::domain, "time point " + std::to_string(t.index) + " outside domain [1," +
                                    std::to_string(d.size) + "]");
}

inline void require_in_domain(const TimeDomain& d, const Interval& iv) {
    if (!iv.well_formed())
        fail(ErrorCode::contract, "malformed interval " + std::to_string(iv.start.index) + ">" +
                                      std::to_string(iv.end.index));
    if (!d.contains(iv))
        fail(ErrorCode::domain, "interval " + to_string(iv) + " outside domain [1," + std::to_string(d.size) + "]");
}

// Value of one attribute on one node: a single value for static attributes,
// or one value per valid instant for time-varying ones.
struct AttributeAssignment {
    std::string fixed;
    std::map<std::uint32_t, std::string> by_time;

    friend bool operator==(const AttributeAssignment&, const AttributeAssignment&) = default;
};

struct TemporalNode {
    std::string id;
    TimeSet validity;
    std::vector<AttributeAssignment> values;  // parallel to the schema

    friend bool operator==(const TemporalNode&, const TemporalNode&) = default;
};

struct TemporalEdge {
    std::uint32_t source = 0;  // node indices
    std::uint32_t target = 0;
    TimeSet validity;

    friend bool operator==(const TemporalEdge&, const TemporalEdge&) = default;
};

class GraphBuilder;

// Immutable temporal attributed graph. Copies share the same storage.
// Nodes are ordered by id; edges by (source id, target id), with undirected
// endpoints stored lexicographically smaller id first.
class TemporalGraph {
public:
    TemporalGraph() : impl_(std::make_shared<const Impl>()) {}

    const AttributeSchema& schema() const { return impl_->schema; }
    Directedness directedness() const { return impl_->directedness; }
    bool directed() const { return impl_->directedness == Directedness::directed; }
    const TimeDomain& domain() const { return impl_->domain; }
    bool allows_self_loops() const { return impl_->self_loops; }

    std::span<const TemporalNode> nodes() const { return impl_->nodes; }
    std::span<const TemporalEdge> edges() const { return impl_->edges; }
    const TemporalNode& node(std::uint32_t i) const { return impl_->nodes[i]; }
    const TemporalEdge& edge(std::uint32_t i) const { return impl_->edges[i]; }
    const std::string& node_id(std::uint32_t i) const { return impl_->nodes[i].id; }

    std::optional<std::uint32_t> find_node(std::string_view id) const {
        auto it = std::lower_bound(impl_->nodes.begin(), impl_->nodes.end(), id,
                                   [](const TemporalNode& n, std::string_view key) { return n.id < key; });
        if (it == impl_->nodes.end() || it->id != id) return std::nullopt;
        return static_cast<std::uint32_t>(it - impl_->nodes.begin());
    }

    std::optional<std::uint32_t> find_edge(std::string_view a, std::string_view b) const {
        auto s = find_node(a);
        auto t = find_node(b);
        if (!s || !t) return std::nullopt;
        if (!directed() && a > b) std::swap(s, t);
        auto it = std::lower_bound(impl_->edges.begin(), impl_->edges.end(), std::pair{*s, *t},
                                   [](const TemporalEdge& e, std::pair<std::uint32_t, std::uint32_t> key) {
                                       return std::pair{e.source, e.target} < key;
                                   });
        if (it == impl_->edges.end() || it->source != *s || it->target != *t) return std::nullopt;
        return static_cast<std::uint32_t>(it - impl_->edges.begin());
    }

    // Value code (index into the attribute's value domain) of node at t.
    // Only meaningful when t is in the node's validity.
    std::uint32_t value_code(std::uint32_t node, std::size_t attr, TimePoint t) const {
        const auto& row = impl_->codes[node * impl_->schema.size() + attr];
        return row.size() == 1 ? row[0] : row[t.index - 1];
    }

    const std::string& value(std::uint32_t node, std::size_t attr, TimePoint t) const {
        return impl_->schema[attr].values[value_code(node, attr, t)];
    }

    friend bool operator==(const TemporalGraph& a, const TemporalGraph& b) {
        if (a.impl_ == b.impl_) return true;
        return a.impl_->schema == b.impl_->schema && a.impl_->directedness == b.impl_->directedness &&
               a.impl_->domain == b.impl_->domain && a.impl_->self_loops == b.impl_->self_loops &&
               a.impl_->nodes == b.impl_->nodes && a.impl_->edges == b.impl_->edges;
    }

private:
    friend class GraphBuilder;

    struct Impl {
        AttributeSchema schema;
        Directedness directedness = Directedness::undirected;
        TimeDomain domain;
        bool self_loops = false;
        std::vector<TemporalNode> nodes;
        std::vector<TemporalEdge> edges;
        // codes[node * |schema| + attr]: one entry for static attributes,
        // domain-size entries for time-varying ones.
        std::vector<std::vector<std::uint32_t>> codes;
    };

    explicit TemporalGraph(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    std::shared_ptr<const Impl> impl_;
};

// Collects nodes and edges by string id and validates every graph invariant
// in build().
class GraphBuilder {
public:
    GraphBuilder(AttributeSchema schema, TimeDomain domain, Directedness directedness = Directedness::undirected,
                 bool allow_self_loops = false)
        : schema_(std::move(schema)), domain_(std::move(domain)), directedness_(directedness),
          self_loops_(allow_self_loops) {
        if (!domain_.labels.empty() && domain_.labels.size() != domain_.size)
            fail(ErrorCode::schema, "time labels must cover every instant of the domain");
    }

    const AttributeSchema& schema() const { return schema_; }
    const TimeDomain& domain() const { return domain_; }

    // static_values is keyed by attribute name; time-varying values by
    // attribute name then instant.
    GraphBuilder& add_node(const std::string& id, TimeSet validity,
                           const std::map<std::string, std::string>& static_values = {},
                           const std::map<std::string, std::map<std::uint32_t, std::string>>& varying = {}) {
        if (nodes_.contains(id)) fail(ErrorCode::contract, "duplicate node '" + id + "'");
        TemporalNode node{id, std::move(validity), std::vector<AttributeAssignment>(schema_.size())};
        for (const auto& [name, v] : static_values) {
            const auto a = schema_.require(name);
            if (schema_[a].kind != AttributeKind::static_value)
                fail(ErrorCode::schema, "attribute '" + name + "' is time-varying; node '" + id + "' gives a static value");
            node.values[a].fixed = v;
        }
        for (const auto& [name, series] : varying) {
            const auto a = schema_.require(name);
            if (schema_[a].kind != AttributeKind::time_varying)
                fail(ErrorCode::schema, "attribute '" + name + "' is static; node '" + id + "' gives a time series");
            node.values[a].by_time = series;
        }
        nodes_.emplace(id, std::move(node));
        return *this;
    }

    // Adds instants to a node's validity; creates nothing.
    GraphBuilder& extend_node_validity(const std::string& id, TimePoint t) {
        auto it = nodes_.find(id);
        if (it == nodes_.end()) fail(ErrorCode::referential, "unknown node '" + id + "'");
        it->second.validity.insert(t);
        return *this;
    }

    bool has_node(const std::string& id) const { return nodes_.contains(id); }

    GraphBuilder& add_edge(std::string a, std::string b, TimeSet validity) {
        auto key = canonical(std::move(a), std::move(b));
        if (edges_.contains(key))
            fail(ErrorCode::contract, "duplicate edge (" + key.first + "," + key.second + ")");
        edges_.emplace(std::move(key), std::move(validity));
        return *this;
    }

    // Merges an instant into the edge's validity, creating the edge if needed.
    GraphBuilder& add_edge_instant(std::string a, std::string b, TimePoint t) {
        edges_[canonical(std::move(a), std::move(b))].insert(t);
        return *this;
    }

    TemporalGraph build() const {
        auto impl = std::make_shared<TemporalGraph::Impl>();
        impl->schema = schema_;
        impl->directedness = directedness_;
        impl->domain = domain_;
        impl->self_loops = self_loops_;

        std::unordered_map<std::string, std::uint32_t> index;
        impl->nodes.reserve(nodes_.size());
        for (const auto& [id, node] : nodes_) {
            if (id.empty()) fail(ErrorCode::schema, "node id must not be empty");
            if (node.validity.empty()) fail(ErrorCode::contract, "node '" + id + "' has empty validity");
            check_in_domain(node.validity, "node '" + id + "'");
            index.emplace(id, static_cast<std::uint32_t>(impl->nodes.size()));
            impl->nodes.push_back(node);
        }

        impl->codes.reserve(impl->nodes.size() * schema_.size());
        for (auto& node : impl->nodes) {
            for (std::size_t a = 0; a < schema_.size(); ++a) {
                const auto& attr = schema_[a];
                auto& assignment = node.values[a];
                if (attr.kind == AttributeKind::static_value) {
                    auto code = attr.code_of(assignment.fixed);
                    if (!code)
                        fail(ErrorCode::schema, "node '" + node.id + "': value '" + assignment.fixed +
                                                    "' not in domain of '" + attr.name + "'");
                    impl->codes.push_back({*code});
                    continue;
                }
                std::vector<std::uint32_t> row(domain_.size, 0);
                TimeSet assigned;
                for (const auto& [t, v] : assignment.by_time) {
                    if (!node.validity.contains(TimePoint{t}))
                        fail(ErrorCode::schema, "node '" + node.id + "': value for '" + attr.name + "' at " +
                                                    std::to_string(t) + " outside node validity");
                    auto code = attr.code_of(v);
                    if (!code)
                        fail(ErrorCode::schema, "node '" + node.id + "': value '" + v + "' not in domain of '" +
                                                    attr.name + "'");
                    row[t - 1] = *code;
                    assigned.insert(TimePoint{t});
                }
                if (!(assigned == node.validity))
                    fail(ErrorCode::schema, "node '" + node.id + "': time-varying attribute '" + attr.name +
                                                "' must be assigned at every valid instant");
                impl->codes.push_back(std::move(row));
            }
        }

        impl->edges.reserve(edges_.size());
        for (const auto& [pair, validity] : edges_) {
            const auto label = "edge (" + pair.first + "," + pair.second + ")";
            auto s = index.find(pair.first);
            auto t = index.find(pair.second);
            if (s == index.end() || t == index.end())
                fail(ErrorCode::referential, label + " references an unknown node");
            if (s->second == t->second && !self_loops_) fail(ErrorCode::contract, label + " is a self-loop");
            if (validity.empty()) fail(ErrorCode::contract, label + " has empty validity");
            check_in_domain(validity, label);
            const auto both = impl->nodes[s->second].validity & impl->nodes[t->second].validity;
            if (!((validity & both) == validity))
                fail(ErrorCode::contract, label + " is valid at an instant where an endpoint is not");
            impl->edges.push_back({s->second, t->second, validity});
        }
        std::sort(impl->edges.begin(), impl->edges.end(), [](const TemporalEdge& x, const TemporalEdge& y) {
            return std::pair{x.source, x.target} < std::pair{y.source, y.target};
        });
        return TemporalGraph(std::move(impl));
    }

private:
    std::pair<std::string, std::string> canonical(std::string a, std::string b) const {
        if (directedness_ == Directedness::undirected && b < a) std::swap(a, b);
        return {std::move(a), std::move(b)};
    }

    void check_in_domain(const TimeSet& s, const std::string& what) const {
        if (auto last = s.last(); last && last->index > domain_.size)
            fail(ErrorCode::domain, what + " valid at " + std::to_string(last->index) + ", outside domain [1," +
                                        std::to_string(domain_.size) + "]");
    }

    AttributeSchema schema_;
    TimeDomain domain_;
    Directedness directedness_;
    bool self_loops_;
    std::map<std::string, TemporalNode> nodes_;
    std::map<std::pair<std::string, std::string>, TimeSet> edges_;
};

// ---------------------------------------------------------------------------
// Materialized plain graphs produced by the temporal operators.

struct ViewNode {
    std::uint32_t node = 0;
    TimeSet instants;   // instants at which the node's attributes may be read
    TimePoint anchor;   // instant used when a single resolution is needed
    bool support = false;  // present only as an endpoint of a retained edge

    friend bool operator==(const ViewNode&, const ViewNode&) = default;
};

struct ViewEdge {
    std::uint32_t edge = 0;
    TimeSet instants;
    TimePoint anchor;

    friend bool operator==(const ViewEdge&, const ViewEdge&) = default;
};

struct Provenance {
    std::string op;
    std::vector<Interval> intervals;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct GraphView {
    TemporalGraph graph;
    std::vector<ViewNode> nodes;  // ascending node index (= ascending id)
    std::vector<ViewEdge> edges;  // ascending edge index
    Provenance provenance;

    bool empty() const { return nodes.empty() && edges.empty(); }

    std::vector<std::string> node_ids() const {
        std::vector<std::string> out;
        out.reserve(nodes.size());
        for (const auto& n : nodes) out.push_back(graph.node_id(n.node));
        return out;
    }

    std::vector<std::string> pure_node_ids() const {
        std::vector<std::string> out;
        for (const auto& n : nodes)
            if (!n.support) out.push_back(graph.node_id(n.node));
        return out;
    }

    std::vector<std::string> support_node_ids() const {
        std::vector<std::string> out;
        for (const auto& n : nodes)
            if (n.support) out.push_back(graph.node_id(n.node));
        return out;
    }

    std::vector<std::pair<std::string, std::string>> edge_pairs() const {
        std::vector<std::pair<std::string, std::string>> out;
        out.reserve(edges.size());
        for (const auto& e : edges) {
            const auto& te = graph.edge(e.edge);
            out.emplace_back(graph.node_id(te.source), graph.node_id(te.target));
        }
        return out;
    }
};

inline GraphView snapshot(const TemporalGraph& g, TimePoint t) {
    require_in_domain(g.domain(), t);
    GraphView view{g, {}, {}, {"snapshot", {Interval::at(t)}}};
    for (std::uint32_t i = 0; i < g.nodes().size(); ++i)
        if (g.node(i).validity.contains(t)) view.nodes.push_back({i, TimeSet{t.index}, t, false});
    for (std::uint32_t i = 0; i < g.edges().size(); ++i)
        if (g.edge(i).validity.contains(t)) view.edges.push_back({i, TimeSet{t.index}, t});
    return view;
}

struct TimeStats {
    TimePoint t;
    std::size_t nodes = 0;
    std::size_t edges = 0;

    friend bool operator==(const TimeStats&, const TimeStats&) = default;
};

inline std::vector<TimeStats> per_time_stats(const TemporalGraph& g) {
    std::vector<TimeStats> rows(g.domain().size);
    for (std::uint32_t t = 1; t <= g.domain().size; ++t) rows[t - 1].t = TimePoint{t};
    for (const auto& n : g.nodes())
        for (auto t : n.validity.points()) ++rows[t.index - 1].nodes;
    for (const auto& e : g.edges())
        for (auto t : e.validity.points()) ++rows[t.index - 1].edges;
    return rows;
}

}  // namespace tempograph
