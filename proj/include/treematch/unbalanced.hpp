#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "treematch/bigraph.hpp"
#include "treematch/matcher.hpp"

namespace treematch {

namespace detail {

inline BipartiteGraph transpose(const BipartiteGraph& g) {
    BipartiteGraph t;
    t.x_count = g.y_count;
    t.y_count = g.x_count;
    t.edges.reserve(g.edges.size());
    for (const auto& e : g.edges) t.add_edge(e.y, e.x, e.w);
    return t;
}

inline Matching transpose(const Matching& m) {
    Matching t;
    t.weight = m.weight;
    for (auto [x, y] : m.pairs) t.pairs.push_back({y, x});
    std::sort(t.pairs.begin(), t.pairs.end());
    return t;
}

// Keeps, for every left node, only its k heaviest incident edges (ties
// broken by lower right index). Original edge order is preserved.
inline BipartiteGraph keep_top_per_row(const BipartiteGraph& g, int k) {
    std::vector<std::vector<int>> by_row(g.x_count);
    for (int i = 0; i < static_cast<int>(g.edges.size()); ++i)
        by_row[g.edges[i].x].push_back(i);
    std::vector<char> keep(g.edges.size(), 0);
    for (auto& row : by_row) {
        std::sort(row.begin(), row.end(), [&](int a, int b) {
            if (g.edges[a].w != g.edges[b].w) return g.edges[a].w > g.edges[b].w;
            return g.edges[a].y < g.edges[b].y;
        });
        for (int i = 0; i < std::min<int>(k, row.size()); ++i) keep[row[i]] = 1;
    }
    BipartiteGraph out;
    out.x_count = g.x_count;
    out.y_count = g.y_count;
    for (int i = 0; i < static_cast<int>(g.edges.size()); ++i)
        if (keep[i]) out.edges.push_back(g.edges[i]);
    return out;
}

}  // namespace detail

// For each node on the smaller side keeps only its n_s heaviest incident
// edges; the result has at most n_s^2 edges and the same optimal matching
// weight (any matching uses at most n_s edges).
inline BipartiteGraph prune_top_ns(const BipartiteGraph& g) {
    int ns = g.small_side();
    if (g.x_count <= g.y_count) return detail::keep_top_per_row(g, ns);
    return detail::transpose(detail::keep_top_per_row(detail::transpose(g), ns));
}

// Partition sweep from the node-unbalanced speedup: order the larger side
// by degree, split it into a remainder block Y_0 and blocks of n_s nodes,
// and repeatedly match the previous round's matched right nodes together
// with the next block. The observer sees each round's induced subgraph
// and matching.
template <typename Observer>
Matching mwm_partition_sweep_observed(const BipartiteGraph& g, Observer&& observe) {
    if (g.x_count == 0 || g.y_count == 0 || g.edges.empty()) return {};
    bool swapped = g.x_count > g.y_count;
    BipartiteGraph work = swapped ? detail::transpose(g) : g;
    const int ns = work.x_count;

    std::vector<int> degree(work.y_count, 0);
    for (const auto& e : work.edges) degree[e.y]++;
    std::vector<int> order(work.y_count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (degree[a] != degree[b]) return degree[a] < degree[b];
        return a < b;
    });

    const int r = work.y_count % ns;
    std::vector<char> in_set(work.y_count, 0);
    for (int i = 0; i < r; ++i) in_set[order[i]] = 1;

    auto round_graph = [&]() {
        BipartiteGraph sub;
        sub.x_count = work.x_count;
        sub.y_count = work.y_count;
        for (const auto& e : work.edges)
            if (in_set[e.y]) sub.edges.push_back(e);
        return sub;
    };

    BipartiteGraph sub = round_graph();
    Matching m = mwm_exact(sub);
    observe(0, sub, m);

    int blocks = work.y_count / ns;
    for (int i = 0; i < blocks; ++i) {
        std::fill(in_set.begin(), in_set.end(), 0);
        for (auto [x, y] : m.pairs) in_set[y] = 1;
        for (int j = r + i * ns; j < r + (i + 1) * ns; ++j) in_set[order[j]] = 1;
        sub = round_graph();
        m = mwm_exact(sub);
        observe(i + 1, sub, m);
    }
    return swapped ? detail::transpose(m) : m;
}

inline Matching mwm_partition_sweep(const BipartiteGraph& g) {
    return mwm_partition_sweep_observed(
        g, [](int, const BipartiteGraph&, const Matching&) {});
}

// Theorem-1-style composition: prune to n_s^2 edges, then sweep.
inline Matching mwm_pruned(const BipartiteGraph& g) {
    return mwm_partition_sweep(prune_top_ns(g));
}

// Edge reduction ahead of hub reinsertion. Keeps E' (edges avoiding the
// hubs) plus, per hub, all edges into Y' (right nodes touched by E') and
// the h heaviest edges leaving Y'; that candidate set competes against a
// per-row top-n_s prune of the whole graph and the smaller one wins.
// Either set still contains a maximum weight matching.
inline BipartiteGraph reduce_edges_for_hubs(const BipartiteGraph& g,
                                            const std::vector<int>& hubs) {
    std::vector<char> is_hub(g.x_count, 0);
    for (int h : hubs) {
        if (h < 0 || h >= g.x_count)
            throw std::out_of_range("reduce_edges_for_hubs: hub index out of range");
        is_hub[h] = 1;
    }
    const int h = static_cast<int>(hubs.size());

    std::vector<char> keep(g.edges.size(), 0);
    std::vector<char> in_yprime(g.y_count, 0);
    for (int i = 0; i < static_cast<int>(g.edges.size()); ++i)
        if (!is_hub[g.edges[i].x]) {
            keep[i] = 1;
            in_yprime[g.edges[i].y] = 1;
        }
    // per hub: edges into Y', plus the h heaviest outside Y'
    std::vector<std::vector<int>> outside(g.x_count);
    for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
        const auto& e = g.edges[i];
        if (!is_hub[e.x]) continue;
        if (in_yprime[e.y])
            keep[i] = 1;
        else
            outside[e.x].push_back(i);
    }
    for (int x = 0; x < g.x_count; ++x) {
        auto& cand = outside[x];
        std::sort(cand.begin(), cand.end(), [&](int a, int b) {
            if (g.edges[a].w != g.edges[b].w) return g.edges[a].w > g.edges[b].w;
            return g.edges[a].y < g.edges[b].y;
        });
        for (int i = 0; i < std::min<int>(h, cand.size()); ++i) keep[cand[i]] = 1;
    }
    BipartiteGraph hub_candidate;
    hub_candidate.x_count = g.x_count;
    hub_candidate.y_count = g.y_count;
    for (int i = 0; i < static_cast<int>(g.edges.size()); ++i)
        if (keep[i]) hub_candidate.edges.push_back(g.edges[i]);

    BipartiteGraph pruned = detail::keep_top_per_row(g, g.small_side());
    return hub_candidate.edges.size() <= pruned.edges.size() ? hub_candidate
                                                             : pruned;
}

// Alternating path starting at a left node, in node order x, y1, x1, ...
// Applying it to the matching either matches a free right endpoint or
// unmatches the final left endpoint.
struct AugmentingPath {
    std::vector<std::pair<bool, int>> nodes;  // first=true for left nodes
    std::int64_t gain = 0;
};

namespace detail {

inline MwmState seeded_state_without(const BipartiteGraph& g, int x,
                                     const Matching& m) {
    MwmState st(g);
    std::vector<char> active(g.x_count, 1);
    active[x] = 0;
    st.seed(active, m);
    return st;
}

}  // namespace detail

// Maximum-gain alternating path from x, given a maximum weight matching m
// of g with x deleted. Returns nothing when leaving x unmatched is optimal.
inline std::optional<AugmentingPath> max_augmenting_path(const BipartiteGraph& g,
                                                         const Matching& m,
                                                         int x) {
    MwmState st = detail::seeded_state_without(g, x, m);
    MwmState::Search s = st.search(x);
    if (s.kind == MwmState::TargetKind::kNone) return std::nullopt;
    AugmentingPath p;
    p.gain = s.gain;
    p.nodes = st.path_nodes(s);
    return p;
}

// Turns mwm(g - x) into mwm(g) by applying the best augmenting path from x.
inline Matching reinsert_node(const BipartiteGraph& g, int x, const Matching& m) {
    MwmState st = detail::seeded_state_without(g, x, m);
    st.insert(x);
    return st.matching(g);
}

// Lemma-2 recovery: given mwm(g - hubs), reduce the edge set and reinsert
// the hubs one at a time.
inline Matching recover_with_hubs(const BipartiteGraph& g,
                                  const std::vector<int>& hubs,
                                  const Matching& m_without) {
    if (hubs.empty()) return m_without;
    BipartiteGraph reduced = reduce_edges_for_hubs(g, hubs);

    // the reduction may only discard edges not needed by any optimum; the
    // given matching's own edges must survive
    std::set<std::pair<int, int>> present;
    for (const auto& e : reduced.edges) present.insert({e.x, e.y});
    for (auto [x, y] : m_without.pairs)
        if (!present.count({x, y}))
            for (const auto& e : g.edges)
                if (e.x == x && e.y == y) {
                    reduced.edges.push_back(e);
                    break;
                }

    std::vector<char> active(g.x_count, 1);
    std::vector<int> order(hubs);
    std::sort(order.begin(), order.end());
    for (int h : order) active[h] = 0;

    MwmState st(reduced);
    st.seed(active, m_without);
    for (int h : order) st.insert(h);
    return st.matching(reduced);
}

}  // namespace treematch
