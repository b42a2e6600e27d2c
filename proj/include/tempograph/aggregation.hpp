#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tempograph/graph.hpp"
#include "tempograph/ops.hpp"

namespace tempograph {

enum class AggregationMode { distinct, non_distinct };

inline std::string_view to_string(AggregationMode m) {
    return m == AggregationMode::distinct ? "distinct" : "non-distinct";
}

inline AggregationMode parse_aggregation_mode(std::string_view s) {
    if (s == "distinct") return AggregationMode::distinct;
    if (s == "non-distinct" || s == "non_distinct" || s == "nondistinct") return AggregationMode::non_distinct;
    fail(ErrorCode::contract, "unknown aggregation mode '" + std::string(s) + "' (expected distinct|non-distinct)");
}

// One value per selected attribute, in schema order.
using ValueCombination = std::vector<std::string>;

// A validated, schema-ordered attribute subset with a mixed-radix encoding
// of value combinations into a single integer.
class AttributeSelection {
public:
    AttributeSelection(const AttributeSchema& schema, const std::vector<std::string>& names) {
        if (names.empty()) fail(ErrorCode::contract, "attribute set must not be empty");
        for (const auto& name : names) {
            const auto a = schema.require(name);
            if (std::find(indices_.begin(), indices_.end(), a) != indices_.end())
                fail(ErrorCode::contract, "attribute '" + name + "' selected twice");
            indices_.push_back(a);
        }
        std::sort(indices_.begin(), indices_.end());
        for (auto a : indices_) {
            names_.push_back(schema[a].name);
            radix_.push_back(schema[a].values.size());
            domains_.push_back(&schema[a].values);
        }
    }

    const std::vector<std::string>& names() const { return names_; }
    std::span<const std::size_t> indices() const { return indices_; }

    std::uint64_t encode(const TemporalGraph& g, std::uint32_t node, TimePoint t) const {
        std::uint64_t code = 0;
        for (std::size_t i = 0; i < indices_.size(); ++i) code = code * radix_[i] + g.value_code(node, indices_[i], t);
        return code;
    }

    // Validates a combination given in schema order.
    std::uint64_t encode(const ValueCombination& combo) const {
        if (combo.size() != indices_.size())
            fail(ErrorCode::schema, "value combination has " + std::to_string(combo.size()) + " values, expected " +
                                        std::to_string(indices_.size()));
        std::uint64_t code = 0;
        for (std::size_t i = 0; i < indices_.size(); ++i) {
            const auto& domain = *domains_[i];
            auto it = std::find(domain.begin(), domain.end(), combo[i]);
            if (it == domain.end())
                fail(ErrorCode::schema, "value '" + combo[i] + "' not in domain of '" + names_[i] + "'");
            code = code * radix_[i] + static_cast<std::uint64_t>(it - domain.begin());
        }
        return code;
    }

    ValueCombination decode(std::uint64_t code) const {
        ValueCombination combo(indices_.size());
        for (std::size_t i = indices_.size(); i-- > 0;) {
            combo[i] = (*domains_[i])[code % radix_[i]];
            code /= radix_[i];
        }
        return combo;
    }

private:
    std::vector<std::size_t> indices_;
    std::vector<std::string> names_;
    std::vector<std::uint64_t> radix_;
    std::vector<const std::vector<std::string>*> domains_;
};

struct AggregateNode {
    ValueCombination combo;
    std::uint64_t weight = 0;

    friend bool operator==(const AggregateNode&, const AggregateNode&) = default;
};

struct AggregateEdge {
    ValueCombination source;
    ValueCombination target;
    std::uint64_t weight = 0;

    friend bool operator==(const AggregateEdge&, const AggregateEdge&) = default;
};

// Weighted quotient graph over value combinations. Entries are ordered by
// value declaration order; zero weights are never stored.
struct AggregateGraph {
    std::vector<std::string> attributes;  // schema order
    AggregationMode mode = AggregationMode::distinct;
    bool directed = false;
    Provenance provenance;
    std::vector<AggregateNode> nodes;
    std::vector<AggregateEdge> edges;

    std::uint64_t node_weight(const ValueCombination& c) const {
        for (const auto& n : nodes)
            if (n.combo == c) return n.weight;
        return 0;
    }

    // For undirected graphs the pair is unordered.
    std::uint64_t edge_weight(const ValueCombination& c, const ValueCombination& d) const {
        for (const auto& e : edges) {
            if (e.source == c && e.target == d) return e.weight;
            if (!directed && e.source == d && e.target == c) return e.weight;
        }
        return 0;
    }

    std::uint64_t total_node_weight() const {
        std::uint64_t s = 0;
        for (const auto& n : nodes) s += n.weight;
        return s;
    }

    std::uint64_t total_edge_weight() const {
        std::uint64_t s = 0;
        for (const auto& e : edges) s += e.weight;
        return s;
    }
};

// Groups the view's nodes and edges by their values on `attributes`.
//
// distinct: every node (edge) contributes once, with the combination it
// carries at its anchor instant. non-distinct: every distinct combination a
// node (endpoint pair) exhibits at some instant of the view contributes
// once. Views resolved at a single instant (snapshots, event graphs) give
// identical results under both modes.
inline AggregateGraph aggregate(const GraphView& view, const std::vector<std::string>& attributes,
                                AggregationMode mode) {
    const auto& g = view.graph;
    const AttributeSelection sel(g.schema(), attributes);

    std::map<std::uint64_t, std::uint64_t> node_w;
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> edge_w;

    std::set<std::uint64_t> seen;
    for (const auto& n : view.nodes) {
        if (mode == AggregationMode::distinct) {
            ++node_w[sel.encode(g, n.node, n.anchor)];
            continue;
        }
        seen.clear();
        for (auto t : n.instants.points()) seen.insert(sel.encode(g, n.node, t));
        for (auto c : seen) ++node_w[c];
    }

    std::set<std::pair<std::uint64_t, std::uint64_t>> pairs;
    auto pair_at = [&](const TemporalEdge& e, TimePoint t) {
        auto a = sel.encode(g, e.source, t);
        auto b = sel.encode(g, e.target, t);
        if (!g.directed() && b < a) std::swap(a, b);
        return std::pair{a, b};
    };
    for (const auto& e : view.edges) {
        const auto& te = g.edge(e.edge);
        if (mode == AggregationMode::distinct) {
            ++edge_w[pair_at(te, e.anchor)];
            continue;
        }
        pairs.clear();
        for (auto t : e.instants.points()) pairs.insert(pair_at(te, t));
        for (const auto& p : pairs) ++edge_w[p];
    }

    AggregateGraph out;
    out.attributes = sel.names();
    out.mode = mode;
    out.directed = g.directed();
    out.provenance = view.provenance;
    for (const auto& [c, w] : node_w) out.nodes.push_back({sel.decode(c), w});
    for (const auto& [p, w] : edge_w) out.edges.push_back({sel.decode(p.first), sel.decode(p.second), w});
    return out;
}

// Reorders a combination given in `request_order` into schema order.
inline ValueCombination to_schema_order(const AttributeSchema& schema, const std::vector<std::string>& request_order,
                                        const ValueCombination& combo) {
    if (combo.size() != request_order.size())
        fail(ErrorCode::schema, "value combination has " + std::to_string(combo.size()) + " values, expected " +
                                    std::to_string(request_order.size()));
    std::vector<std::pair<std::size_t, std::string>> keyed;
    for (std::size_t i = 0; i < combo.size(); ++i) keyed.emplace_back(schema.require(request_order[i]), combo[i]);
    std::sort(keyed.begin(), keyed.end());
    ValueCombination out;
    for (auto& [_, v] : keyed) out.push_back(std::move(v));
    return out;
}

// Inverse of to_schema_order.
inline ValueCombination to_request_order(const AttributeSchema& schema, const std::vector<std::string>& request_order,
                                         const ValueCombination& combo) {
    std::vector<std::size_t> schema_idx;
    for (const auto& name : request_order) schema_idx.push_back(schema.require(name));
    auto sorted = schema_idx;
    std::sort(sorted.begin(), sorted.end());
    ValueCombination out;
    for (auto a : schema_idx) {
        const auto pos = static_cast<std::size_t>(std::find(sorted.begin(), sorted.end(), a) - sorted.begin());
        out.push_back(combo.at(pos));
    }
    return out;
}

// Number of (c, c') edges in the aggregated event graph; combinations are in
// schema order of `attributes`.
inline std::uint64_t event_count(const TemporalGraph& g, EventKind kind, TimePoint t_r, const Interval& T_r,
                                 Semantics s, const std::vector<std::string>& attributes, const ValueCombination& c,
                                 const ValueCombination& c2, AggregationMode mode = AggregationMode::distinct) {
    const AttributeSelection sel(g.schema(), attributes);
    sel.encode(c);
    sel.encode(c2);
    return aggregate(event_graph(g, kind, t_r, T_r, s), attributes, mode).edge_weight(c, c2);
}

}  // namespace tempograph
