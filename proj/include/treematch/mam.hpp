#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "treematch/bigraph.hpp"

namespace treematch {

// Colored weighted bipartite multigraph over two path-node sequences.
// Positions are 1-based; at most four parallel edges per pair and the
// color multiset of a pair follows one of the three construction cases
// (all four colors / white+gray / gray alone).
enum class MamColor { kWhite, kGray, kGreen, kRed };

struct MamEdge {
    int i = 0;
    int j = 0;
    MamColor color = MamColor::kWhite;
    std::int64_t w = 0;  // agreement values may legitimately be 0
};

struct MamMultigraph {
    int p = 0;
    int q = 0;
    std::vector<MamEdge> edges;
};

// below: strictly smaller in both coordinates; crosses: strictly ordered
// in opposite directions.
inline bool mam_below(const MamEdge& e, const MamEdge& f) {
    return e.i < f.i && e.j < f.j;
}
inline bool mam_crosses(const MamEdge& e, const MamEdge& f) {
    return (e.i < f.i && e.j > f.j) || (e.i > f.i && e.j < f.j);
}

inline Violation validate_mam(const MamMultigraph& g) {
    std::map<std::pair<int, int>, std::vector<MamColor>> per_pair;
    for (const auto& e : g.edges) {
        if (e.i < 1 || e.i > g.p || e.j < 1 || e.j > g.q)
            return {false, "edge index out of range"};
        if (e.w < 0) return {false, "negative weight"};
        per_pair[{e.i, e.j}].push_back(e.color);
    }
    for (auto& [pos, colors] : per_pair) {
        (void)pos;
        if (colors.size() > 4) return {false, "more than four parallel edges"};
        std::sort(colors.begin(), colors.end());
        auto count = [&](MamColor c) {
            return std::count(colors.begin(), colors.end(), c);
        };
        int white = count(MamColor::kWhite), gray = count(MamColor::kGray);
        int green = count(MamColor::kGreen), red = count(MamColor::kRed);
        bool case1 = white == 1 && gray == 1 && green == 1 && red == 1;
        bool case2 = white == 1 && gray == 1 && green == 0 && red == 0;
        bool case3 = white == 0 && gray == 1 && green == 0 && red == 0;
        if (!case1 && !case2 && !case3)
            return {false, "pair color multiset matches no construction case"};
    }
    return {};
}

// An agreement matching is a node-disjoint edge set whose white edges are
// pairwise noncrossing and whose non-white part is empty, one gray, one
// green, one red, or one crossing red-green pair, every such special edge
// lying below all white edges. A gray edge never coexists with green or
// red ones.
//
// Answers, for each query (i,j) with i = 1 or j = 1, the maximum weight
// of an agreement matching of the suffix subgraph induced by positions
// (>= i, >= j). Direct DP over suffix corners rather than the cascading
// data structures of the binary-tree literature.
inline std::vector<std::int64_t> solve_mam(
    const MamMultigraph& g, const std::vector<std::pair<int, int>>& queries) {
    const int p = g.p, q = g.q;
    auto grid = [&](std::int64_t init) {
        return std::vector<std::vector<std::int64_t>>(
            p + 2, std::vector<std::int64_t>(q + 2, init));
    };

    // best white at each pair (several parallel whites never occur in
    // case-shaped graphs, but take the max anyway)
    auto white = grid(-1);
    for (const auto& e : g.edges)
        if (e.color == MamColor::kWhite) white[e.i][e.j] = std::max(white[e.i][e.j], e.w);

    // W[i][j]: best noncrossing white matching within the suffix
    auto W = grid(0);
    for (int i = p; i >= 1; --i)
        for (int j = q; j >= 1; --j) {
            std::int64_t best = std::max(W[i + 1][j], W[i][j + 1]);
            if (white[i][j] >= 0)
                best = std::max(best, white[i][j] + W[i + 1][j + 1]);
            W[i][j] = best;
        }

    // candidate values for the special part, anchored at the smallest
    // suffix corner that contains the whole special set
    auto cand = grid(-1);
    auto offer = [&](int i, int j, std::int64_t v) {
        cand[i][j] = std::max(cand[i][j], v);
    };
    std::vector<const MamEdge*> reds, greens;
    for (const auto& e : g.edges) {
        switch (e.color) {
            case MamColor::kWhite:
                break;
            case MamColor::kGray:
            case MamColor::kGreen:
            case MamColor::kRed:
                offer(e.i, e.j, e.w + W[e.i + 1][e.j + 1]);
                break;
        }
        if (e.color == MamColor::kRed) reds.push_back(&e);
        if (e.color == MamColor::kGreen) greens.push_back(&e);
    }
    for (const MamEdge* r : reds)
        for (const MamEdge* gr : greens) {
            if (!mam_crosses(*r, *gr)) continue;
            int lo_i = std::min(r->i, gr->i), lo_j = std::min(r->j, gr->j);
            int hi_i = std::max(r->i, gr->i), hi_j = std::max(r->j, gr->j);
            offer(lo_i, lo_j, r->w + gr->w + W[hi_i + 1][hi_j + 1]);
        }

    auto S = grid(-1);
    for (int i = p; i >= 1; --i)
        for (int j = q; j >= 1; --j)
            S[i][j] = std::max({cand[i][j], S[i + 1][j], S[i][j + 1]});

    std::vector<std::int64_t> out;
    out.reserve(queries.size());
    for (auto [i, j] : queries) {
        if (i < 1 || i > p || j < 1 || j > q || (i != 1 && j != 1))
            throw std::invalid_argument("solve_mam: invalid query");
        out.push_back(std::max(W[i][j], S[i][j]));
    }
    return out;
}

// Exhaustive oracle over edge subsets; guards against blowup.
inline std::int64_t mam_bruteforce(const MamMultigraph& g, int qi, int qj,
                                   int max_edges = 20) {
    std::vector<const MamEdge*> in_suffix;
    for (const auto& e : g.edges)
        if (e.i >= qi && e.j >= qj) in_suffix.push_back(&e);
    if (static_cast<int>(in_suffix.size()) > max_edges)
        throw std::invalid_argument("mam_bruteforce: instance too large");

    const int m = static_cast<int>(in_suffix.size());
    std::int64_t best = 0;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        std::vector<const MamEdge*> sel;
        for (int b = 0; b < m; ++b)
            if (mask & (1u << b)) sel.push_back(in_suffix[b]);

        bool ok = true;
        int gray = 0, green = 0, red = 0;
        const MamEdge* red_edge = nullptr;
        const MamEdge* green_edge = nullptr;
        for (std::size_t a = 0; a < sel.size() && ok; ++a) {
            for (std::size_t b = a + 1; b < sel.size() && ok; ++b) {
                if (sel[a]->i == sel[b]->i || sel[a]->j == sel[b]->j) ok = false;
                if (sel[a]->color == MamColor::kWhite &&
                    sel[b]->color == MamColor::kWhite && mam_crosses(*sel[a], *sel[b]))
                    ok = false;
            }
        }
        for (const MamEdge* e : sel) {
            if (e->color == MamColor::kGray) ++gray;
            if (e->color == MamColor::kGreen) ++green, green_edge = e;
            if (e->color == MamColor::kRed) ++red, red_edge = e;
        }
        if (gray > 1 || green > 1 || red > 1) ok = false;
        if (gray >= 1 && (green + red) >= 1) ok = false;
        if (red == 1 && green == 1 && !mam_crosses(*red_edge, *green_edge)) ok = false;
        for (const MamEdge* e : sel) {
            if (e->color == MamColor::kWhite) continue;
            for (const MamEdge* f : sel)
                if (f->color == MamColor::kWhite && !mam_below(*e, *f)) ok = false;
        }
        if (!ok) continue;
        std::int64_t w = 0;
        for (const MamEdge* e : sel) w += e->w;
        best = std::max(best, w);
    }
    return best;
}

}  // namespace treematch
