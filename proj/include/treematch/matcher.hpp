#pragma once

#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "treematch/bigraph.hpp"

namespace treematch {

// Potentials-based maximum weight matching (successive augmenting paths,
// Hungarian family). Left nodes are activated one at a time; each
// activation finds the best alternating path starting at the new node and
// applies it when its gain is positive. The path may end at a free right
// node or end by unmatching some left node, so the state always holds a
// maximum weight matching of the subgraph induced by the active left
// nodes.
//
// Dual certificate maintained throughout: u[x] + v[y] >= w(x,y) on active
// edges, u,v >= 0, equality on matched edges, u[x] = 0 for active
// unmatched x, v[y] = 0 for unmatched y.
//
// This replaces the scaling matchers the literature uses as black boxes;
// the asymptotic log factors differ but the input/output contract is the
// same.
class MwmState {
 public:
    static constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

    explicit MwmState(const BipartiteGraph& g)
        : x_count_(g.x_count),
          y_count_(g.y_count),
          adj_(g.x_count),
          u_(g.x_count, 0),
          v_(g.y_count, 0),
          match_x_(g.x_count, -1),
          match_y_(g.y_count, -1) {
        for (const auto& e : g.edges) adj_[e.x].push_back({e.y, e.w});
    }

    enum class TargetKind { kNone, kFreeY, kUnmatchX };

    struct Search {
        int x0 = -1;
        std::int64_t ux0 = 0;            // potential given to x0 for this search
        std::int64_t total = 0;          // cap C = min over targets of dist+exit
        std::int64_t gain = 0;           // ux0 - total
        TargetKind kind = TargetKind::kNone;
        int target = -1;
        std::vector<std::int64_t> dist_x, dist_y;
        std::vector<int> parent_y;       // left node that relaxed each y
        std::vector<int> touched_x, touched_y;
    };

    // Best alternating path from x0 (currently unmatched, edges not yet
    // constrained). Does not modify the state.
    Search search(int x0) const {
        Search s;
        s.x0 = x0;
        s.dist_x.assign(x_count_, kInf);
        s.dist_y.assign(y_count_, kInf);
        s.parent_y.assign(y_count_, -1);
        s.dist_x[x0] = 0;
        s.touched_x.push_back(x0);

        for (const auto& [y, w] : adj_[x0]) s.ux0 = std::max(s.ux0, w - v_[y]);
        if (s.ux0 <= 0) {
            s.ux0 = 0;
            s.total = 0;
            return s;  // leaving x0 unmatched is optimal
        }
        s.total = s.ux0;  // empty path candidate

        using Item = std::pair<std::int64_t, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
        auto relax = [&](int from_x, std::int64_t base) {
            for (const auto& [y, w] : adj_[from_x]) {
                std::int64_t rc = u_from(s, from_x) + v_[y] - w;
                std::int64_t nd = base + rc;
                if (nd < s.dist_y[y]) {
                    if (s.dist_y[y] == kInf) s.touched_y.push_back(y);
                    s.dist_y[y] = nd;
                    s.parent_y[y] = from_x;
                    pq.push({nd, y});
                }
            }
        };
        relax(x0, 0);

        while (!pq.empty()) {
            auto [d, y] = pq.top();
            pq.pop();
            if (d != s.dist_y[y]) continue;
            if (d >= s.total) break;  // no target can improve past the cap
            int x = match_y_[y];
            if (x < 0) {
                // free right node: applying the path matches it
                s.total = d;
                s.kind = TargetKind::kFreeY;
                s.target = y;
            } else {
                s.dist_x[x] = d;
                s.touched_x.push_back(x);
                if (d + u_[x] < s.total) {
                    // ending here unmatches x
                    s.total = d + u_[x];
                    s.kind = TargetKind::kUnmatchX;
                    s.target = x;
                }
                relax(x, d);
            }
        }
        s.gain = s.ux0 - s.total;
        return s;
    }

    // Applies the search: potential update plus augmentation when a real
    // target was chosen.
    void commit(const Search& s) {
        const std::int64_t c = s.total;
        u_[s.x0] = s.ux0;
        for (int x : s.touched_x)
            u_[x] += std::min(s.dist_x[x], c) - c;
        for (int y : s.touched_y) {
            std::int64_t d = s.dist_y[y];
            if (d < c) v_[y] += c - d;
        }
        if (s.kind == TargetKind::kNone) return;

        int y;
        if (s.kind == TargetKind::kFreeY) {
            y = s.target;
        } else {
            y = match_x_[s.target];
            match_x_[s.target] = -1;
        }
        while (true) {
            int x = s.parent_y[y];
            int old = match_x_[x];
            match_x_[x] = y;
            match_y_[y] = x;
            if (x == s.x0) break;
            y = old;
        }
    }

    std::int64_t insert(int x0) {
        Search s = search(x0);
        commit(s);
        return s.gain;
    }

    // Alternating node sequence x0,y1,x1,... described by a search.
    // Must be called before commit (relies on the pre-augment matching).
    // Pair.first is true for left-side nodes.
    std::vector<std::pair<bool, int>> path_nodes(const Search& s) const {
        std::vector<std::pair<bool, int>> rev;
        int y;
        if (s.kind == TargetKind::kUnmatchX) {
            rev.push_back({true, s.target});
            y = match_x_[s.target];
        } else {
            y = s.target;
        }
        while (true) {
            rev.push_back({false, y});
            int x = s.parent_y[y];
            rev.push_back({true, x});
            if (x == s.x0) break;
            y = match_x_[x];
        }
        std::reverse(rev.begin(), rev.end());
        return rev;
    }

    // Seeds the state from a maximum weight matching of the subgraph
    // induced by the active left nodes. Potentials are recovered with
    // Bellman-Ford over the alternating residual graph (free nodes at 0,
    // matched left nodes at the maximum active weight so components with
    // no free node also get finite, tight labels). The search invariants
    // only need feasibility, tightness on matched edges and v = 0 on free
    // right nodes; potentials at matched nodes may come out negative.
    // Throws if the matching is not optimal: the residual graph then has
    // a negative cycle or an improving path that drags a free node's (or
    // a matched left node's) label below zero.
    void seed(const std::vector<char>& active_x, const Matching& m) {
        std::int64_t max_w = 0;
        for (int x = 0; x < x_count_; ++x)
            if (active_x[x])
                for (const auto& [y, w] : adj_[x]) max_w = std::max(max_w, w);

        for (auto [x, y] : m.pairs) {
            match_x_[x] = y;
            match_y_[y] = x;
        }

        // phi over left+right nodes; u = phi(x), v = -phi(y)
        std::vector<std::int64_t> phi_x(x_count_, kInf), phi_y(y_count_, kInf);
        for (int x = 0; x < x_count_; ++x) {
            if (!active_x[x]) continue;
            phi_x[x] = match_x_[x] >= 0 ? max_w : 0;
        }
        for (int y = 0; y < y_count_; ++y)
            if (match_y_[y] < 0) phi_y[y] = 0;

        int n = x_count_ + y_count_;
        bool changed = true;
        for (int round = 0; round <= n && changed; ++round) {
            changed = false;
            for (int x = 0; x < x_count_; ++x) {
                if (!active_x[x] || phi_x[x] == kInf) continue;
                for (const auto& [y, w] : adj_[x]) {
                    if (phi_x[x] - w < phi_y[y]) {
                        phi_y[y] = phi_x[x] - w;
                        changed = true;
                    }
                    if (match_y_[y] == x && phi_y[y] + w < phi_x[x]) {
                        phi_x[x] = phi_y[y] + w;
                        changed = true;
                    }
                }
            }
            if (round == n && changed)
                throw std::logic_error("seed: matching is not optimal");
        }

        for (int x = 0; x < x_count_; ++x) {
            if (active_x[x] && phi_x[x] != kInf && phi_x[x] < 0)
                throw std::logic_error("seed: matching is not optimal");
            u_[x] = (active_x[x] && phi_x[x] != kInf) ? phi_x[x] : 0;
        }
        for (int y = 0; y < y_count_; ++y) {
            if (match_y_[y] < 0 && phi_y[y] != 0)
                throw std::logic_error("seed: matching is not optimal");
            v_[y] = phi_y[y] == kInf ? 0 : -phi_y[y];
        }
    }

    Matching matching(const BipartiteGraph& g) const {
        Matching m;
        for (int x = 0; x < x_count_; ++x)
            if (match_x_[x] >= 0) m.pairs.push_back({x, match_x_[x]});
        std::sort(m.pairs.begin(), m.pairs.end());
        for (const auto& e : g.edges)
            if (e.x < x_count_ && match_x_[e.x] == e.y) m.weight += e.w;
        return m;
    }

    int matched_to_x(int x) const { return match_x_[x]; }
    int matched_to_y(int y) const { return match_y_[y]; }

 private:
    std::int64_t u_from(const Search& s, int x) const {
        return x == s.x0 ? s.ux0 : u_[x];
    }

    int x_count_, y_count_;
    std::vector<std::vector<std::pair<int, std::int64_t>>> adj_;
    std::vector<std::int64_t> u_, v_;
    std::vector<int> match_x_, match_y_;
};

// Maximum weight matching over all matchings of g (not necessarily
// perfect). Deterministic: left nodes are activated in index order.
inline Matching mwm_exact(const BipartiteGraph& g) {
    MwmState st(g);
    for (int x = 0; x < g.x_count; ++x) st.insert(x);
    return st.matching(g);
}

}  // namespace treematch
