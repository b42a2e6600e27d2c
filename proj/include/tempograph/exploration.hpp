#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "tempograph/aggregation.hpp"
#include "tempograph/graph.hpp"
#include "tempograph/ops.hpp"

namespace tempograph {

// Direction in which an event count moves as the past interval is extended
// further into the past.
enum class Monotonicity { non_increasing, non_decreasing };

inline std::string_view to_string(Monotonicity m) {
    return m == Monotonicity::non_increasing ? "non-increasing" : "non-decreasing";
}

inline constexpr Monotonicity monotonicity(EventKind kind, Semantics s) {
    // A strict flatten shrinks as the interval grows, a loose one grows.
    const bool past_grows = s == Semantics::loose;
    switch (kind) {
        case EventKind::stability:
        case EventKind::shrinkage:
            return past_grows ? Monotonicity::non_decreasing : Monotonicity::non_increasing;
        case EventKind::growth:
            return past_grows ? Monotonicity::non_increasing : Monotonicity::non_decreasing;
    }
    return Monotonicity::non_increasing;
}

struct CandidateTuple {
    TimePoint t_r;
    Interval T_r;
    std::uint64_t w = 0;

    std::uint32_t length() const { return T_r.length(); }

    friend bool operator==(const CandidateTuple&, const CandidateTuple&) = default;
};

struct ExplorationQuery {
    EventKind kind = EventKind::stability;
    Semantics semantics = Semantics::strict;
    std::vector<std::string> attributes;
    ValueCombination source;  // schema order
    ValueCombination target;  // schema order
};

struct ExploreOptions {
    unsigned threads = 1;
};

// Counts for one reference point, indexed by interval length - 1: counts[i]
// is the event count for T_r = [t_r - 1 - i, t_r - 1].
struct CandidateChain {
    TimePoint t_r;
    std::vector<std::uint64_t> counts;

    Interval interval(std::size_t i) const {
        return {TimePoint{static_cast<std::uint32_t>(t_r.index - 1 - i)}, TimePoint{t_r.index - 1}};
    }

    friend bool operator==(const CandidateChain&, const CandidateChain&) = default;
};

inline bool chain_is_monotone(const CandidateChain& chain, Monotonicity m) {
    for (std::size_t i = 1; i < chain.counts.size(); ++i) {
        if (m == Monotonicity::non_increasing && chain.counts[i] > chain.counts[i - 1]) return false;
        if (m == Monotonicity::non_decreasing && chain.counts[i] < chain.counts[i - 1]) return false;
    }
    return true;
}

inline std::vector<CandidateTuple> candidates_of(const std::vector<CandidateChain>& chains) {
    std::vector<CandidateTuple> out;
    for (const auto& chain : chains)
        for (std::size_t i = 0; i < chain.counts.size(); ++i)
            if (chain.counts[i] > 0) out.push_back({chain.t_r, chain.interval(i), chain.counts[i]});
    return out;
}

namespace detail {

inline void require_explorable(const TemporalGraph& g) {
    if (g.domain().size < 2) fail(ErrorCode::contract, "exploration needs a time domain of at least 2 instants");
}

// Per-edge time tables for edges whose endpoints carry (c, c') at some
// valid instant. run[t] is the length of the validity run ending at t,
// last[t] the latest valid instant <= t (0 if none), match[t] whether the
// endpoints carry the requested pair at t.
struct EdgeTables {
    std::uint32_t width = 0;  // domain size + 1, index 0 unused
    std::vector<std::uint32_t> run;
    std::vector<std::uint32_t> last;
    std::vector<std::uint8_t> valid;
    std::vector<std::uint8_t> match;
    std::size_t count = 0;

    EdgeTables(const TemporalGraph& g, const ExplorationQuery& q) {
        const AttributeSelection sel(g.schema(), q.attributes);
        const auto c = sel.encode(q.source);
        const auto c2 = sel.encode(q.target);
        const auto n = g.domain().size;
        width = n + 1;

        std::vector<std::uint8_t> m(width);
        for (const auto& e : g.edges()) {
            bool any = false;
            std::fill(m.begin(), m.end(), 0);
            for (auto t : e.validity.points()) {
                const auto a = sel.encode(g, e.source, t);
                const auto b = sel.encode(g, e.target, t);
                const bool hit = (a == c && b == c2) || (!g.directed() && a == c2 && b == c);
                m[t.index] = hit;
                any |= hit;
            }
            if (!any) continue;
            const auto base = run.size();
            run.resize(base + width, 0);
            last.resize(base + width, 0);
            valid.resize(base + width, 0);
            match.insert(match.end(), m.begin(), m.end());
            for (std::uint32_t t = 1; t <= n; ++t) {
                const bool v = e.validity.contains(TimePoint{t});
                valid[base + t] = v;
                run[base + t] = v ? run[base + t - 1] + 1 : 0;
                last[base + t] = v ? t : last[base + t - 1];
            }
            ++count;
        }
    }
};

// Event counts for every past interval of one reference point, in
// O(edges + instants): each edge contributes to a contiguous range of
// interval start points, accumulated with a difference array.
inline CandidateChain count_chain(const EdgeTables& tables, EventKind kind, Semantics s, std::uint32_t t_r) {
    const auto p = t_r - 1;  // latest instant of every past interval
    std::vector<std::int64_t> diff(t_r + 1, 0);  // over start points a in [1, p]
    auto add = [&](std::uint32_t lo, std::uint32_t hi) {
        lo = std::max(lo, 1u);
        hi = std::min(hi, p);
        if (lo > hi) return;
        ++diff[lo];
        --diff[hi + 1];
    };

    for (std::size_t i = 0; i < tables.count; ++i) {
        const auto base = i * tables.width;
        const bool now = tables.valid[base + t_r];
        const auto run = tables.run[base + p];
        const auto last = tables.last[base + p];
        switch (kind) {
            case EventKind::stability:
                if (!now || !tables.match[base + t_r]) break;
                if (s == Semantics::strict) {
                    if (run > 0) add(t_r - run, p);
                } else if (last > 0) {
                    add(1, last);
                }
                break;
            case EventKind::growth:
                if (!now || !tables.match[base + t_r]) break;
                if (s == Semantics::strict) {
                    if (t_r - run >= 2) add(1, t_r - run - 1);
                } else {
                    add(last + 1, p);
                }
                break;
            case EventKind::shrinkage:
                if (now) break;
                if (s == Semantics::strict) {
                    if (run > 0 && tables.match[base + p]) add(t_r - run, p);
                } else if (last > 0 && tables.match[base + last]) {
                    add(1, last);
                }
                break;
        }
    }

    CandidateChain chain{TimePoint{t_r}, std::vector<std::uint64_t>(p, 0)};
    std::int64_t running = 0;
    std::vector<std::uint64_t> by_start(p + 1, 0);
    for (std::uint32_t a = 1; a <= p; ++a) {
        running += diff[a];
        by_start[a] = static_cast<std::uint64_t>(running);
    }
    for (std::uint32_t len = 1; len <= p; ++len) chain.counts[len - 1] = by_start[t_r - len];
    return chain;
}

}  // namespace detail

// Event counts for every (t_r, T_r) pair, one chain per reference point
// 2..N, in ascending t_r order.
inline std::vector<CandidateChain> candidate_chains(const TemporalGraph& g, const ExplorationQuery& q,
                                                    ExploreOptions opts = {}) {
    detail::require_explorable(g);
    const detail::EdgeTables tables(g, q);
    const auto n = g.domain().size;
    std::vector<CandidateChain> chains(n - 1);

    const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, n - 1));
    if (threads == 1) {
        for (std::uint32_t t = 2; t <= n; ++t) chains[t - 2] = detail::count_chain(tables, q.kind, q.semantics, t);
        return chains;
    }
    std::vector<std::future<void>> workers;
    for (unsigned w = 0; w < threads; ++w) {
        workers.push_back(std::async(std::launch::async, [&, w] {
            for (std::uint32_t t = 2 + w; t <= n; t += threads)
                chains[t - 2] = detail::count_chain(tables, q.kind, q.semantics, t);
        }));
    }
    for (auto& f : workers) f.get();
    return chains;
}

// All candidates with a positive count, ascending by (t_r, interval length).
inline std::vector<CandidateTuple> enumerate_candidates(const TemporalGraph& g, const ExplorationQuery& q,
                                                        ExploreOptions opts = {}) {
    return candidates_of(candidate_chains(g, q, opts));
}

// Rebuilds every chain by materializing each event graph and aggregating it.
inline std::vector<CandidateChain> naive_candidate_chains(const TemporalGraph& g, const ExplorationQuery& q) {
    detail::require_explorable(g);
    const auto n = g.domain().size;
    std::vector<CandidateChain> chains;
    for (std::uint32_t t = 2; t <= n; ++t) {
        CandidateChain chain{TimePoint{t}, {}};
        for (std::uint32_t a = t - 1; a >= 1; --a)
            chain.counts.push_back(event_count(g, q.kind, TimePoint{t}, Interval{a, t - 1}, q.semantics,
                                               q.attributes, q.source, q.target));
        chains.push_back(std::move(chain));
    }
    return chains;
}

// Pareto domination over (interval length, count). Under non-increasing
// counts longer intervals are better; under non-decreasing counts shorter
// ones are.
inline bool dominates(const CandidateTuple& a, const CandidateTuple& b, Monotonicity m) {
    const auto la = a.length();
    const auto lb = b.length();
    const bool longer_better = m == Monotonicity::non_increasing;
    const bool len_strict = longer_better ? la > lb : la < lb;
    const bool len_weak = longer_better ? la >= lb : la <= lb;
    return (len_strict && a.w >= b.w) || (len_weak && a.w > b.w);
}

struct SkylineEntry {
    CandidateTuple tuple;
    std::uint64_t dod = 0;

    friend bool operator==(const SkylineEntry&, const SkylineEntry&) = default;
};

struct SkylineResult {
    Monotonicity monotonicity = Monotonicity::non_increasing;
    std::vector<SkylineEntry> skyline;  // ascending (t_r, length)
    std::vector<SkylineEntry> top_k;    // dod desc, then w desc, length desc, t_r asc

    friend bool operator==(const SkylineResult&, const SkylineResult&) = default;
};

namespace detail {

inline void order_skyline(SkylineResult& r, std::size_t top_k) {
    std::sort(r.skyline.begin(), r.skyline.end(), [](const SkylineEntry& a, const SkylineEntry& b) {
        return std::pair{a.tuple.t_r, a.tuple.length()} < std::pair{b.tuple.t_r, b.tuple.length()};
    });
    r.top_k = r.skyline;
    std::stable_sort(r.top_k.begin(), r.top_k.end(), [](const SkylineEntry& a, const SkylineEntry& b) {
        if (a.dod != b.dod) return a.dod > b.dod;
        if (a.tuple.w != b.tuple.w) return a.tuple.w > b.tuple.w;
        if (a.tuple.length() != b.tuple.length()) return a.tuple.length() > b.tuple.length();
        return a.tuple.t_r < b.tuple.t_r;
    });
    if (r.top_k.size() > top_k) r.top_k.resize(top_k);
}

inline void require_top_k(std::size_t top_k) {
    if (top_k < 1) fail(ErrorCode::contract, "top_k must be at least 1");
}

}  // namespace detail

// Skyline via length buckets: a tuple survives iff its count beats every
// strictly better length and ties the best of its own length. Domination
// degrees come from per-bucket sorted counts.
inline SkylineResult skyline_of(const std::vector<CandidateTuple>& candidates, Monotonicity m, std::size_t top_k) {
    detail::require_top_k(top_k);
    SkylineResult result;
    result.monotonicity = m;
    if (candidates.empty()) return result;

    std::uint32_t max_len = 0;
    for (const auto& c : candidates) max_len = std::max(max_len, c.length());
    std::vector<std::vector<std::uint64_t>> bucket(max_len + 1);
    for (const auto& c : candidates) bucket[c.length()].push_back(c.w);
    for (auto& b : bucket) std::sort(b.begin(), b.end());

    // Lengths ordered from best to worst.
    std::vector<std::uint32_t> order;
    for (std::uint32_t l = 1; l <= max_len; ++l) order.push_back(l);
    if (m == Monotonicity::non_increasing) std::reverse(order.begin(), order.end());

    // best_before[l]: max count over strictly better lengths (0 = none, counts are positive).
    std::vector<std::uint64_t> best_before(max_len + 1, 0);
    std::uint64_t running = 0;
    for (auto l : order) {
        best_before[l] = running;
        if (!bucket[l].empty()) running = std::max(running, bucket[l].back());
    }

    auto count_le = [](const std::vector<std::uint64_t>& b, std::uint64_t w) {
        return static_cast<std::uint64_t>(std::upper_bound(b.begin(), b.end(), w) - b.begin());
    };
    for (const auto& c : candidates) {
        const auto l = c.length();
        if (c.w <= best_before[l] || c.w < bucket[l].back()) continue;
        // Dominated by c: equal-or-worse length with count <= w, minus exact (l, w) ties.
        std::uint64_t dod = 0;
        for (std::uint32_t other = 1; other <= max_len; ++other) {
            const bool worse_or_equal = m == Monotonicity::non_increasing ? other <= l : other >= l;
            if (worse_or_equal) dod += count_le(bucket[other], c.w);
        }
        const auto& own = bucket[l];
        dod -= static_cast<std::uint64_t>(std::upper_bound(own.begin(), own.end(), c.w) -
                                          std::lower_bound(own.begin(), own.end(), c.w));
        result.skyline.push_back({c, dod});
    }
    detail::order_skyline(result, top_k);
    return result;
}

// Full pairwise scan.
inline SkylineResult naive_skyline_of(const std::vector<CandidateTuple>& candidates, Monotonicity m,
                                      std::size_t top_k) {
    detail::require_top_k(top_k);
    SkylineResult result;
    result.monotonicity = m;
    for (const auto& c : candidates) {
        bool dominated = false;
        std::uint64_t dod = 0;
        for (const auto& x : candidates) {
            if (dominates(x, c, m)) dominated = true;
            if (dominates(c, x, m)) ++dod;
        }
        if (!dominated) result.skyline.push_back({c, dod});
    }
    detail::order_skyline(result, top_k);
    return result;
}

inline SkylineResult skyline(const TemporalGraph& g, const ExplorationQuery& q, std::size_t top_k,
                             ExploreOptions opts = {}) {
    detail::require_top_k(top_k);
    return skyline_of(enumerate_candidates(g, q, opts), monotonicity(q.kind, q.semantics), top_k);
}

inline SkylineResult naive_skyline(const TemporalGraph& g, const ExplorationQuery& q, std::size_t top_k) {
    detail::require_top_k(top_k);
    return naive_skyline_of(candidates_of(naive_candidate_chains(g, q)), monotonicity(q.kind, q.semantics), top_k);
}

struct ThresholdResult {
    std::vector<CandidateTuple> hits;  // at most one per t_r, ascending t_r

    friend bool operator==(const ThresholdResult&, const ThresholdResult&) = default;
};

namespace detail {
inline void require_threshold(std::uint64_t k) {
    if (k < 1) fail(ErrorCode::contract, "threshold k must be at least 1");
}
}  // namespace detail

// Walks each chain from the shortest interval outwards and stops as soon as
// monotonicity rules out a better hit: the longest qualifying interval for
// non-increasing counts, the shortest for non-decreasing ones.
inline ThresholdResult threshold_of(const std::vector<CandidateChain>& chains, Monotonicity m, std::uint64_t k) {
    detail::require_threshold(k);
    ThresholdResult result;
    for (const auto& chain : chains) {
        if (m == Monotonicity::non_increasing) {
            std::optional<std::size_t> best;
            for (std::size_t i = 0; i < chain.counts.size() && chain.counts[i] >= k; ++i) best = i;
            if (best) result.hits.push_back({chain.t_r, chain.interval(*best), chain.counts[*best]});
        } else {
            for (std::size_t i = 0; i < chain.counts.size(); ++i) {
                if (chain.counts[i] >= k) {
                    result.hits.push_back({chain.t_r, chain.interval(i), chain.counts[i]});
                    break;
                }
            }
        }
    }
    return result;
}

// Inspects every interval of every chain without relying on monotonicity.
inline ThresholdResult naive_threshold_of(const std::vector<CandidateChain>& chains, Monotonicity m,
                                          std::uint64_t k) {
    detail::require_threshold(k);
    ThresholdResult result;
    for (const auto& chain : chains) {
        std::optional<CandidateTuple> best;
        for (std::size_t i = 0; i < chain.counts.size(); ++i) {
            if (chain.counts[i] < k) continue;
            CandidateTuple c{chain.t_r, chain.interval(i), chain.counts[i]};
            const bool better = !best || (m == Monotonicity::non_increasing ? c.length() > best->length()
                                                                           : c.length() < best->length());
            if (better) best = c;
        }
        if (best) result.hits.push_back(*best);
    }
    return result;
}

inline ThresholdResult threshold_search(const TemporalGraph& g, const ExplorationQuery& q, std::uint64_t k,
                                        ExploreOptions opts = {}) {
    detail::require_threshold(k);
    return threshold_of(candidate_chains(g, q, opts), monotonicity(q.kind, q.semantics), k);
}

inline ThresholdResult naive_threshold_search(const TemporalGraph& g, const ExplorationQuery& q, std::uint64_t k) {
    detail::require_threshold(k);
    return naive_threshold_of(naive_candidate_chains(g, q), monotonicity(q.kind, q.semantics), k);
}

}  // namespace tempograph
