#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "tempograph/graph.hpp"

namespace tempograph {

enum class Semantics { strict, loose };
enum class EventKind { stability, growth, shrinkage };

inline constexpr std::array<EventKind, 3> all_event_kinds{EventKind::stability, EventKind::growth,
                                                           EventKind::shrinkage};
inline constexpr std::array<Semantics, 2> all_semantics{Semantics::strict, Semantics::loose};

inline std::string_view to_string(Semantics s) { return s == Semantics::strict ? "strict" : "loose"; }

inline std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::stability: return "stability";
        case EventKind::growth: return "growth";
        case EventKind::shrinkage: return "shrinkage";
    }
    return "?";
}

inline Semantics parse_semantics(std::string_view s) {
    if (s == "strict") return Semantics::strict;
    if (s == "loose") return Semantics::loose;
    fail(ErrorCode::contract, "unknown semantics '" + std::string(s) + "' (expected strict|loose)");
}

inline EventKind parse_event_kind(std::string_view s) {
    if (s == "stability") return EventKind::stability;
    if (s == "growth") return EventKind::growth;
    if (s == "shrinkage") return EventKind::shrinkage;
    fail(ErrorCode::contract, "unknown event '" + std::string(s) + "' (expected stability|growth|shrinkage)");
}

// Stability is explored with strict semantics, growth and shrinkage with loose.
inline Semantics default_semantics(EventKind k) {
    return k == EventKind::stability ? Semantics::strict : Semantics::loose;
}

namespace detail {

inline bool member(const TimeSet& validity, const Interval& iv, Semantics s) {
    return s == Semantics::strict ? validity.covers(iv) : validity.intersects(iv);
}

inline TimeSet restrict(const TimeSet& validity, std::initializer_list<Interval> scope) {
    TimeSet out;
    for (const auto& iv : scope) out |= validity.restricted_to(iv);
    return out;
}

// Marks endpoints of retained edges that are not already in the node list
// as support nodes, resolved at `anchor_of(node)`.
template <typename AnchorFn>
void add_support_nodes(GraphView& view, AnchorFn anchor_of) {
    std::vector<char> present(view.graph.nodes().size(), 0);
    for (const auto& n : view.nodes) present[n.node] = 1;
    std::vector<std::uint32_t> extra;
    for (const auto& e : view.edges) {
        const auto& te = view.graph.edge(e.edge);
        for (auto endpoint : {te.source, te.target}) {
            if (!present[endpoint]) {
                present[endpoint] = 1;
                extra.push_back(endpoint);
            }
        }
    }
    for (auto n : extra) {
        auto [instants, anchor] = anchor_of(n);
        view.nodes.push_back({n, std::move(instants), anchor, true});
    }
    std::sort(view.nodes.begin(), view.nodes.end(),
              [](const ViewNode& a, const ViewNode& b) { return a.node < b.node; });
}

}  // namespace detail

// Restricts the graph to tp: elements valid somewhere in tp, with validity
// (and time-varying values) cut down to tp. The time domain is unchanged.
inline TemporalGraph project(const TemporalGraph& g, const Interval& tp) {
    require_in_domain(g.domain(), tp);
    GraphBuilder builder(g.schema(), g.domain(), g.directedness(), g.allows_self_loops());
    for (const auto& n : g.nodes()) {
        auto validity = n.validity.restricted_to(tp);
        if (validity.empty()) continue;
        std::map<std::string, std::string> fixed;
        std::map<std::string, std::map<std::uint32_t, std::string>> varying;
        for (std::size_t a = 0; a < g.schema().size(); ++a) {
            const auto& attr = g.schema()[a];
            if (attr.kind == AttributeKind::static_value) {
                fixed[attr.name] = n.values[a].fixed;
                continue;
            }
            auto& series = varying[attr.name];
            for (const auto& [t, v] : n.values[a].by_time)
                if (tp.contains(TimePoint{t})) series.emplace(t, v);
        }
        builder.add_node(n.id, std::move(validity), fixed, varying);
    }
    for (const auto& e : g.edges()) {
        auto validity = e.validity.restricted_to(tp);
        if (validity.empty()) continue;
        builder.add_edge(g.node_id(e.source), g.node_id(e.target), std::move(validity));
    }
    return builder.build();
}

// Plain graph of the elements valid at every (strict) or some (loose)
// instant of T.
inline GraphView flatten(const TemporalGraph& g, const Interval& T, Semantics s) {
    require_in_domain(g.domain(), T);
    GraphView view{g, {}, {}, {"flatten/" + std::string(to_string(s)), {T}}};
    for (std::uint32_t i = 0; i < g.nodes().size(); ++i) {
        const auto& v = g.node(i).validity;
        if (!detail::member(v, T, s)) continue;
        auto instants = v.restricted_to(T);
        view.nodes.push_back({i, instants, *instants.last(), false});
    }
    for (std::uint32_t i = 0; i < g.edges().size(); ++i) {
        const auto& v = g.edge(i).validity;
        if (!detail::member(v, T, s)) continue;
        auto instants = v.restricted_to(T);
        view.edges.push_back({i, instants, *instants.last()});
    }
    return view;
}

inline GraphView union_of(const TemporalGraph& g, const Interval& t1, const Interval& t2) {
    require_in_domain(g.domain(), t1);
    require_in_domain(g.domain(), t2);
    GraphView view{g, {}, {}, {"union", {t1, t2}}};
    for (std::uint32_t i = 0; i < g.nodes().size(); ++i) {
        const auto& v = g.node(i).validity;
        if (!v.intersects(t1) && !v.intersects(t2)) continue;
        auto instants = detail::restrict(v, {t1, t2});
        view.nodes.push_back({i, instants, *instants.last(), false});
    }
    for (std::uint32_t i = 0; i < g.edges().size(); ++i) {
        const auto& v = g.edge(i).validity;
        if (!v.intersects(t1) && !v.intersects(t2)) continue;
        auto instants = detail::restrict(v, {t1, t2});
        view.edges.push_back({i, instants, *instants.last()});
    }
    return view;
}

inline GraphView intersection(const TemporalGraph& g, const Interval& t1, const Interval& t2) {
    require_in_domain(g.domain(), t1);
    require_in_domain(g.domain(), t2);
    GraphView view{g, {}, {}, {"intersection", {t1, t2}}};
    for (std::uint32_t i = 0; i < g.nodes().size(); ++i) {
        const auto& v = g.node(i).validity;
        if (!v.intersects(t1) || !v.intersects(t2)) continue;
        auto instants = detail::restrict(v, {t1, t2});
        view.nodes.push_back({i, instants, *instants.last(), false});
    }
    for (std::uint32_t i = 0; i < g.edges().size(); ++i) {
        const auto& v = g.edge(i).validity;
        if (!v.intersects(t1) || !v.intersects(t2)) continue;
        auto instants = detail::restrict(v, {t1, t2});
        view.edges.push_back({i, instants, *instants.last()});
    }
    return view;
}

// Elements of G[t1] absent from G[t2]. Endpoints of retained edges that
// exist in both intervals are kept as support nodes.
inline GraphView difference(const TemporalGraph& g, const Interval& t1, const Interval& t2) {
    require_in_domain(g.domain(), t1);
    require_in_domain(g.domain(), t2);
    GraphView view{g, {}, {}, {"difference", {t1, t2}}};
    for (std::uint32_t i = 0; i < g.nodes().size(); ++i) {
        const auto& v = g.node(i).validity;
        if (!v.intersects(t1) || v.intersects(t2)) continue;
        auto instants = v.restricted_to(t1);
        view.nodes.push_back({i, instants, *instants.last(), false});
    }
    for (std::uint32_t i = 0; i < g.edges().size(); ++i) {
        const auto& v = g.edge(i).validity;
        if (!v.intersects(t1) || v.intersects(t2)) continue;
        auto instants = v.restricted_to(t1);
        view.edges.push_back({i, instants, *instants.last()});
    }
    detail::add_support_nodes(view, [&](std::uint32_t n) {
        auto instants = g.node(n).validity.restricted_to(t1);
        return std::pair{instants, *instants.last()};
    });
    return view;
}

// Event graph between the past interval T_r (flattened under s) and the
// reference point t_r, which must immediately follow T_r. Every element is
// resolved at a single instant: t_r when valid there, otherwise the latest
// valid instant of T_r.
inline GraphView event_graph(const TemporalGraph& g, EventKind kind, TimePoint t_r, const Interval& T_r,
                             Semantics s) {
    require_in_domain(g.domain(), t_r);
    require_in_domain(g.domain(), T_r);
    if (T_r.end.index + 1 != t_r.index)
        fail(ErrorCode::contract, "past interval " + to_string(T_r) + " must end immediately before reference point " +
                                      std::to_string(t_r.index));

    GraphView view{g, {}, {}, {std::string(to_string(kind)) + "/" + std::string(to_string(s)), {Interval::at(t_r), T_r}}};

    auto anchor = [&](const TimeSet& v) { return v.contains(t_r) ? t_r : *v.latest_in(T_r); };
    auto keep = [&](const TimeSet& v) {
        const bool past = detail::member(v, T_r, s);
        const bool now = v.contains(t_r);
        switch (kind) {
            case EventKind::stability: return past && now;
            case EventKind::growth: return now && !past;
            case EventKind::shrinkage: return past && !now;
        }
        return false;
    };

    for (std::uint32_t i = 0; i < g.nodes().size(); ++i) {
        const auto& v = g.node(i).validity;
        if (!keep(v)) continue;
        const auto at = anchor(v);
        view.nodes.push_back({i, TimeSet{at.index}, at, false});
    }
    for (std::uint32_t i = 0; i < g.edges().size(); ++i) {
        const auto& v = g.edge(i).validity;
        if (!keep(v)) continue;
        const auto at = anchor(v);
        view.edges.push_back({i, TimeSet{at.index}, at});
    }
    if (kind != EventKind::stability) {
        detail::add_support_nodes(view, [&](std::uint32_t n) {
            const auto at = anchor(g.node(n).validity);
            return std::pair{TimeSet{at.index}, at};
        });
    }
    return view;
}

struct Evolution {
    GraphView stability;
    GraphView growth;
    GraphView shrinkage;
};

inline Evolution evolution(const TemporalGraph& g, TimePoint t_r, const Interval& T_r, Semantics s) {
    return {event_graph(g, EventKind::stability, t_r, T_r, s), event_graph(g, EventKind::growth, t_r, T_r, s),
            event_graph(g, EventKind::shrinkage, t_r, T_r, s)};
}

}  // namespace tempograph
