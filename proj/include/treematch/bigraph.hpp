#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace treematch {

// Weighted bipartite graph. Left nodes 0..x_count-1, right nodes
// 0..y_count-1, at most one edge per (x,y) pair, weights >= 1.
// Internally constructed subgraphs may leave nodes isolated; validate()
// rejects that, the matching routines tolerate it.
struct BipartiteGraph {
    struct Edge {
        int x = 0;
        int y = 0;
        std::int64_t w = 0;
    };

    int x_count = 0;
    int y_count = 0;
    std::vector<Edge> edges;

    void add_edge(int x, int y, std::int64_t w) { edges.push_back({x, y, w}); }

    std::int64_t total_weight() const {
        std::int64_t s = 0;
        for (const Edge& e : edges) s += e.w;
        return s;
    }

    std::int64_t max_weight() const {
        std::int64_t m = 0;
        for (const Edge& e : edges) m = std::max(m, e.w);
        return m;
    }

    // min{|X|,|Y|}
    int small_side() const { return std::min(x_count, y_count); }
};

// Node-disjoint edge set plus its total weight.
struct Matching {
    std::vector<std::pair<int, int>> pairs;
    std::int64_t weight = 0;
};

struct Violation {
    bool ok = true;
    std::string message;
};

inline Violation validate(const BipartiteGraph& g) {
    if (g.x_count < 0 || g.y_count < 0) return {false, "negative node count"};
    std::vector<char> seen_x(g.x_count, 0), seen_y(g.y_count, 0);
    std::vector<char> used(static_cast<std::size_t>(g.x_count) * g.y_count, 0);
    for (const auto& e : g.edges) {
        if (e.w <= 0) return {false, "nonpositive weight"};
        if (e.x < 0 || e.x >= g.x_count || e.y < 0 || e.y >= g.y_count)
            return {false, "edge index out of range"};
        std::size_t slot = static_cast<std::size_t>(e.x) * g.y_count + e.y;
        if (used[slot]) return {false, "duplicate edge"};
        used[slot] = 1;
        seen_x[e.x] = 1;
        seen_y[e.y] = 1;
    }
    for (int x = 0; x < g.x_count; ++x)
        if (!seen_x[x]) return {false, "isolated node"};
    for (int y = 0; y < g.y_count; ++y)
        if (!seen_y[y]) return {false, "isolated node"};
    return {};
}

// Recomputes the weight of `pairs` against g and checks node-disjointness.
// Test helper as much as library code, so failures return false rather
// than aborting.
inline bool matching_consistent(const BipartiteGraph& g, const Matching& m) {
    std::vector<char> ux(g.x_count, 0), uy(g.y_count, 0);
    std::int64_t w = 0;
    for (auto [x, y] : m.pairs) {
        if (x < 0 || x >= g.x_count || y < 0 || y >= g.y_count) return false;
        if (ux[x] || uy[y]) return false;
        ux[x] = 1;
        uy[y] = 1;
        bool found = false;
        for (const auto& e : g.edges)
            if (e.x == x && e.y == y) {
                w += e.w;
                found = true;
                break;
            }
        if (!found) return false;
    }
    return w == m.weight;
}

// Exhaustive-enumeration maximum weight matching. Oracle for the real
// matchers; refuses instances with more than 8 nodes on the smaller side.
inline Matching mwm_bruteforce(const BipartiteGraph& g) {
    if (g.small_side() > 8)
        throw std::invalid_argument("mwm_bruteforce: instance too large");

    // Enumerate over the smaller side.
    bool swap_sides = g.x_count > g.y_count;
    int ns = swap_sides ? g.y_count : g.x_count;
    std::vector<std::vector<std::pair<int, std::int64_t>>> adj(ns);
    for (const auto& e : g.edges) {
        int a = swap_sides ? e.y : e.x;
        int b = swap_sides ? e.x : e.y;
        adj[a].push_back({b, e.w});
    }

    std::vector<int> partner(ns, -1), best_partner(ns, -1);
    std::vector<char> used_b;
    int other = swap_sides ? g.x_count : g.y_count;
    used_b.assign(other, 0);
    std::int64_t best = 0;

    // DFS over nodes of the small side: leave unmatched or pick a partner.
    auto rec = [&](auto&& self, int a, std::int64_t acc) -> void {
        if (a == ns) {
            if (acc > best) {
                best = acc;
                best_partner = partner;
            }
            return;
        }
        self(self, a + 1, acc);
        for (auto [b, w] : adj[a]) {
            if (used_b[b]) continue;
            used_b[b] = 1;
            partner[a] = b;
            self(self, a + 1, acc + w);
            partner[a] = -1;
            used_b[b] = 0;
        }
    };
    rec(rec, 0, 0);

    Matching m;
    m.weight = best;
    for (int a = 0; a < ns; ++a)
        if (best_partner[a] >= 0) {
            int x = swap_sides ? best_partner[a] : a;
            int y = swap_sides ? a : best_partner[a];
            m.pairs.push_back({x, y});
        }
    std::sort(m.pairs.begin(), m.pairs.end());
    return m;
}

// Text format: header `bipartite <x_count> <y_count>`, one `x y w` line per
// edge, `#` starts a comment.
inline BipartiteGraph parse_graph(std::istream& in) {
    BipartiteGraph g;
    std::string line;
    bool have_header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        if (!have_header) {
            std::string tag;
            if (!(ls >> tag)) continue;  // blank line before header
            if (tag != "bipartite")
                throw std::runtime_error("line " + std::to_string(lineno) +
                                         ": expected 'bipartite' header");
            if (!(ls >> g.x_count >> g.y_count))
                throw std::runtime_error("line " + std::to_string(lineno) +
                                         ": malformed header");
            have_header = true;
            continue;
        }
        int x, y;
        std::int64_t w;
        if (!(ls >> x)) continue;  // blank
        if (!(ls >> y >> w))
            throw std::runtime_error("line " + std::to_string(lineno) +
                                     ": malformed edge");
        g.add_edge(x, y, w);
    }
    if (!have_header) throw std::runtime_error("missing 'bipartite' header");
    return g;
}

inline BipartiteGraph parse_graph(const std::string& text) {
    std::istringstream in(text);
    return parse_graph(in);
}

inline void write_graph(std::ostream& out, const BipartiteGraph& g) {
    out << "bipartite " << g.x_count << ' ' << g.y_count << '\n';
    for (const auto& e : g.edges) out << e.x << ' ' << e.y << ' ' << e.w << '\n';
}

}  // namespace treematch
