#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tempograph/graph.hpp"

namespace tempograph {

inline constexpr std::size_t default_sample_limit = 500;

namespace detail {

// Undirected adjacency over view-local positions, neighbours ascending.
inline std::vector<std::vector<std::size_t>> view_adjacency(const GraphView& view) {
    std::vector<std::size_t> local(view.graph.nodes().size(), SIZE_MAX);
    for (std::size_t i = 0; i < view.nodes.size(); ++i) local[view.nodes[i].node] = i;
    std::vector<std::vector<std::size_t>> adj(view.nodes.size());
    for (const auto& e : view.edges) {
        const auto& te = view.graph.edge(e.edge);
        const auto a = local[te.source];
        const auto b = local[te.target];
        if (a == SIZE_MAX || b == SIZE_MAX || a == b) continue;
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& n : adj) {
        std::sort(n.begin(), n.end());
        n.erase(std::unique(n.begin(), n.end()), n.end());
    }
    return adj;
}

// Subgraph of the view induced by the marked local positions.
inline GraphView induced(const GraphView& view, const std::vector<char>& keep, std::string op) {
    GraphView out{view.graph, {}, {}, view.provenance};
    out.provenance.op += "|" + op;
    std::vector<char> by_node(view.graph.nodes().size(), 0);
    for (std::size_t i = 0; i < view.nodes.size(); ++i) {
        if (!keep[i]) continue;
        out.nodes.push_back(view.nodes[i]);
        by_node[view.nodes[i].node] = 1;
    }
    for (const auto& e : view.edges) {
        const auto& te = view.graph.edge(e.edge);
        if (by_node[te.source] && by_node[te.target]) out.edges.push_back(e);
    }
    return out;
}

}  // namespace detail

// Largest connected component by node count; ties go to the component
// holding the smallest node id.
inline GraphView max_connected_component(const GraphView& view) {
    if (view.nodes.empty()) return view;
    const auto adj = detail::view_adjacency(view);
    std::vector<std::size_t> component(view.nodes.size(), SIZE_MAX);
    std::size_t best = SIZE_MAX, best_size = 0, next = 0;
    // Positions ascend with node id, so the first component reaching a size
    // wins ties.
    for (std::size_t start = 0; start < view.nodes.size(); ++start) {
        if (component[start] != SIZE_MAX) continue;
        std::vector<std::size_t> stack{start};
        component[start] = next;
        std::size_t size = 0;
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            ++size;
            for (auto v : adj[u]) {
                if (component[v] == SIZE_MAX) {
                    component[v] = next;
                    stack.push_back(v);
                }
            }
        }
        if (size > best_size) {
            best_size = size;
            best = next;
        }
        ++next;
    }
    std::vector<char> keep(view.nodes.size());
    for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = component[i] == best;
    return detail::induced(view, keep, "max_component");
}

// Snowball sample: breadth-first from a seeded random start node, adding
// whole neighbour levels while they fit under `limit`. The level that would
// overflow is truncated in id order so the sample holds exactly `limit`
// nodes. When a component is exhausted early, expansion restarts from
// another seeded random node.
inline GraphView snowball_sample(const GraphView& view, std::size_t limit, std::uint64_t seed) {
    if (limit < 1) fail(ErrorCode::contract, "sample limit must be at least 1");
    if (limit >= view.nodes.size()) return view;

    const auto adj = detail::view_adjacency(view);
    std::mt19937_64 rng(seed);
    std::vector<char> taken(view.nodes.size(), 0);
    std::size_t count = 0;

    auto random_unvisited = [&] {
        std::vector<std::size_t> open;
        for (std::size_t i = 0; i < taken.size(); ++i)
            if (!taken[i]) open.push_back(i);
        return open[rng() % open.size()];
    };

    while (count < limit) {
        std::vector<std::size_t> level{random_unvisited()};
        while (!level.empty() && count < limit) {
            std::sort(level.begin(), level.end());
            if (count + level.size() > limit) level.resize(limit - count);
            for (auto u : level) taken[u] = 1;
            count += level.size();
            std::set<std::size_t> next;
            for (auto u : level)
                for (auto v : adj[u])
                    if (!taken[v]) next.insert(v);
            level.assign(next.begin(), next.end());
        }
    }
    return detail::induced(view, taken, "snowball");
}

struct OverviewNode {
    std::string id;
    std::string value;

    friend bool operator==(const OverviewNode&, const OverviewNode&) = default;
};

struct OverviewPayload {
    std::vector<OverviewNode> nodes;
    std::vector<std::pair<std::string, std::string>> edges;
    std::size_t node_count = 0;
    std::size_t value_count = 0;  // distinct attribute values among the nodes

    friend bool operator==(const OverviewPayload&, const OverviewPayload&) = default;
};

// snapshot -> snowball sample when larger than `limit` -> largest component.
inline OverviewPayload overview(const TemporalGraph& g, TimePoint t, const std::string& attribute,
                                std::size_t limit = default_sample_limit, std::uint64_t seed = 0) {
    const auto attr = g.schema().require(attribute);
    require_in_domain(g.domain(), t);
    if (limit < 1) fail(ErrorCode::contract, "sample limit must be at least 1");

    auto view = snapshot(g, t);
    if (view.nodes.size() > limit) view = snowball_sample(view, limit, seed);
    view = max_connected_component(view);

    OverviewPayload payload;
    std::set<std::string> values;
    for (const auto& n : view.nodes) {
        const auto& v = g.value(n.node, attr, t);
        payload.nodes.push_back({g.node_id(n.node), v});
        values.insert(v);
    }
    payload.edges = view.edge_pairs();
    payload.node_count = payload.nodes.size();
    payload.value_count = values.size();
    return payload;
}

}  // namespace tempograph
