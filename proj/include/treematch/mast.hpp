#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "treematch/bigraph.hpp"
#include "treematch/ltree.hpp"
#include "treematch/mam.hpp"
#include "treematch/matcher.hpp"

namespace treematch {

// ---------------------------------------------------------------------
// Brute-force engine: enumerate one-to-one same-label pair sets and keep
// those that extend to a label-preserving homeomorphism. The mapping of
// every pairwise-LCA closure node is forced, so validity reduces to the
// closure map being a bijection that commutes with LCAs and pairs up
// label-compatible nodes. Validity is monotone under subset growth,
// which lets the search prune.
// ---------------------------------------------------------------------

namespace detail {

class MastBrute {
 public:
    MastBrute(const LabeledTree& t1, const LabeledTree& t2)
        : t1_(t1), t2_(t2), lca1_(t1), lca2_(t2) {
        for (int a = 0; a < t1.size(); ++a) {
            if (t1.nodes[a].label.empty()) continue;
            for (int b = 0; b < t2.size(); ++b)
                if (t1.nodes[a].label == t2.nodes[b].label) cand_.push_back({a, b});
        }
    }

    std::int64_t run() {
        used_a_.assign(t1_.size(), 0);
        used_b_.assign(t2_.size(), 0);
        best_ = 0;
        extend(0);
        return best_;
    }

 private:
    void extend(std::size_t from) {
        best_ = std::max<std::int64_t>(best_, sel_.size());
        if (static_cast<std::int64_t>(sel_.size() + (cand_.size() - from)) <= best_)
            return;
        for (std::size_t k = from; k < cand_.size(); ++k) {
            auto [a, b] = cand_[k];
            if (used_a_[a] || used_b_[b]) continue;
            sel_.push_back({a, b});
            used_a_[a] = used_b_[b] = 1;
            if (valid()) extend(k + 1);
            used_a_[a] = used_b_[b] = 0;
            sel_.pop_back();
        }
    }

    bool valid() const {
        std::map<int, int> fwd, rev;
        for (std::size_t i = 0; i < sel_.size(); ++i)
            for (std::size_t j = i; j < sel_.size(); ++j) {
                int c1 = lca1_.lca(sel_[i].first, sel_[j].first);
                int c2 = lca2_.lca(sel_[i].second, sel_[j].second);
                auto f = fwd.find(c1);
                if (f != fwd.end() && f->second != c2) return false;
                auto r = rev.find(c2);
                if (r != rev.end() && r->second != c1) return false;
                fwd[c1] = c2;
                rev[c2] = c1;
            }
        // closure nodes must pair label-compatibly (same symbol or both
        // unlabeled): they become nodes of the agreement subtree
        for (auto [c1, c2] : fwd)
            if (t1_.nodes[c1].label != t2_.nodes[c2].label) return false;
        // the closure map must commute with LCA in both trees
        for (auto [x1, x2] : fwd)
            for (auto [y1, y2] : fwd) {
                int l1 = lca1_.lca(x1, y1);
                auto it = fwd.find(l1);
                if (it == fwd.end()) return false;  // closure is LCA-closed
                if (it->second != lca2_.lca(x2, y2)) return false;
            }
        return true;
    }

    const LabeledTree& t1_;
    const LabeledTree& t2_;
    EulerLca lca1_, lca2_;
    std::vector<std::pair<int, int>> cand_;
    std::vector<std::pair<int, int>> sel_;
    std::vector<char> used_a_, used_b_;
    std::int64_t best_ = 0;
};

}  // namespace detail

inline std::int64_t mast_bruteforce(const LabeledTree& t1, const LabeledTree& t2) {
    if (delta(t1, t2) > 12)
        throw std::invalid_argument("mast_bruteforce: instance too large");
    return detail::MastBrute(t1, t2).run();
}

// ---------------------------------------------------------------------
// Child-versus-child matching graphs
// ---------------------------------------------------------------------

// Weighted bipartite graph between C(u) and C(v); zero-weight child
// pairs are omitted (edge weights must stay positive).
template <typename Table>
BipartiteGraph build_Guv(const LabeledTree& t1, int u, const LabeledTree& t2,
                         int v, Table&& mast_of) {
    const auto& cu = t1.nodes[u].children;
    const auto& cv = t2.nodes[v].children;
    BipartiteGraph g;
    g.x_count = static_cast<int>(cu.size());
    g.y_count = static_cast<int>(cv.size());
    for (int i = 0; i < g.x_count; ++i)
        for (int j = 0; j < g.y_count; ++j) {
            std::int64_t w = mast_of(cu[i], cv[j]);
            if (w > 0) g.add_edge(i, j, w);
        }
    return g;
}

// G_uv with the heavy child's row and column stripped (zero edges are
// already gone). Heavy children are passed as child node ids, -1 if none.
template <typename Table>
BipartiteGraph build_Huv(const LabeledTree& t1, int u, int heavy_u,
                         const LabeledTree& t2, int v, int heavy_v,
                         Table&& mast_of) {
    const auto& cu = t1.nodes[u].children;
    const auto& cv = t2.nodes[v].children;
    BipartiteGraph g = build_Guv(t1, u, t2, v, mast_of);
    BipartiteGraph h;
    h.x_count = g.x_count;
    h.y_count = g.y_count;
    for (const auto& e : g.edges) {
        if (heavy_u >= 0 && cu[e.x] == heavy_u) continue;
        if (heavy_v >= 0 && cv[e.y] == heavy_v) continue;
        h.edges.push_back(e);
    }
    return h;
}

// H_uv plus the selected heavy-child edges of G_uv: for hvy(u) every edge
// into a column touched by H_uv plus the heaviest of the remaining ones,
// and symmetrically for hvy(v).
template <typename Table>
BipartiteGraph build_Hpuv(const LabeledTree& t1, int u, int heavy_u,
                          const LabeledTree& t2, int v, int heavy_v,
                          Table&& mast_of) {
    const auto& cu = t1.nodes[u].children;
    const auto& cv = t2.nodes[v].children;
    BipartiteGraph g = build_Guv(t1, u, t2, v, mast_of);

    int hx = -1, hy = -1;
    for (std::size_t i = 0; i < cu.size(); ++i)
        if (cu[i] == heavy_u) hx = static_cast<int>(i);
    for (std::size_t j = 0; j < cv.size(); ++j)
        if (cv[j] == heavy_v) hy = static_cast<int>(j);

    std::vector<char> row_in_h(std::max(g.x_count, 1), 0);
    std::vector<char> col_in_h(std::max(g.y_count, 1), 0);
    std::set<std::pair<int, int>> keep;
    for (const auto& e : g.edges) {
        if (e.x == hx || e.y == hy) continue;
        keep.insert({e.x, e.y});
        row_in_h[e.x] = 1;
        col_in_h[e.y] = 1;
    }

    auto add_heavy_side = [&](bool row_side, int heavy_index) {
        if (heavy_index < 0) return;
        const BipartiteGraph::Edge* best = nullptr;
        for (const auto& e : g.edges) {
            int own = row_side ? e.x : e.y;
            int other = row_side ? e.y : e.x;
            if (own != heavy_index) continue;
            bool adjacent = row_side ? col_in_h[other] : row_in_h[other];
            if (adjacent) {
                keep.insert({e.x, e.y});
            } else if (!best || e.w > best->w ||
                       (e.w == best->w && other < (row_side ? best->y : best->x))) {
                best = &e;
            }
        }
        if (best) keep.insert({best->x, best->y});
    };
    add_heavy_side(true, hx);
    add_heavy_side(false, hy);

    BipartiteGraph out;
    out.x_count = g.x_count;
    out.y_count = g.y_count;
    for (const auto& e : g.edges)
        if (keep.count({e.x, e.y})) out.edges.push_back(e);
    return out;
}

// ---------------------------------------------------------------------
// Reference engine: the plain bottom-up recurrence over all node pairs,
// with an exact matching per label-compatible pair. Correctness anchor;
// no accelerations.
// ---------------------------------------------------------------------

struct MastReference {
    std::int64_t value = 0;
    std::vector<std::vector<std::int64_t>> table;  // [t1 node][t2 node]
};

inline MastReference mast_reference_table(const LabeledTree& t1,
                                          const LabeledTree& t2) {
    MastReference res;
    if (t1.empty() || t2.empty()) return res;
    res.table.assign(t1.size(), std::vector<std::int64_t>(t2.size(), 0));

    auto post1 = t1.preorder();
    auto post2 = t2.preorder();
    std::reverse(post1.begin(), post1.end());
    std::reverse(post2.begin(), post2.end());

    BipartiteGraph scratch;
    for (int u : post1) {
        for (int v : post2) {
            std::int64_t best = 0;
            for (int x : t2.nodes[v].children)
                best = std::max(best, res.table[u][x]);
            for (int x : t1.nodes[u].children)
                best = std::max(best, res.table[x][v]);

            bool both_unlabeled = !t1.labeled(u) && !t2.labeled(v);
            bool same_symbol =
                t1.labeled(u) && t1.nodes[u].label == t2.nodes[v].label;
            if (both_unlabeled || same_symbol) {
                scratch.edges.clear();
                const auto& cu = t1.nodes[u].children;
                const auto& cv = t2.nodes[v].children;
                scratch.x_count = static_cast<int>(cu.size());
                scratch.y_count = static_cast<int>(cv.size());
                for (int i = 0; i < scratch.x_count; ++i)
                    for (int j = 0; j < scratch.y_count; ++j) {
                        std::int64_t w = res.table[cu[i]][cv[j]];
                        if (w > 0) scratch.add_edge(i, j, w);
                    }
                std::int64_t matched =
                    scratch.edges.empty() ? 0 : mwm_exact(scratch).weight;
                best = std::max(best, matched + (same_symbol ? 1 : 0));
            }
            res.table[u][v] = best;
        }
    }
    res.value = res.table[t1.root][t2.root];
    return res;
}

inline std::int64_t mast_reference(const LabeledTree& t1, const LabeledTree& t2) {
    return mast_reference_table(t1, t2).value;
}

// One witness agreement subtree extracted from the reference table,
// together with its embeddings into both inputs.
struct MastWitness {
    std::int64_t value = 0;
    LabeledTree tree;
    std::vector<int> into_t1;  // witness node -> t1 node
    std::vector<int> into_t2;
};

inline MastWitness mast_reference_witness(const LabeledTree& t1,
                                          const LabeledTree& t2) {
    MastReference ref = mast_reference_table(t1, t2);
    MastWitness w;
    w.value = ref.value;
    if (ref.value == 0) return w;

    // rebuild the clause choice at (u,v); returns the witness root or -1
    auto rec = [&](auto&& self, int u, int v, int parent) -> int {
        std::int64_t target = ref.table[u][v];
        if (target == 0) return -1;
        for (int x : t2.nodes[v].children)
            if (ref.table[u][x] == target) return self(self, u, x, parent);
        for (int x : t1.nodes[u].children)
            if (ref.table[x][v] == target) return self(self, x, v, parent);

        bool same_symbol = t1.labeled(u) && t1.nodes[u].label == t2.nodes[v].label;
        BipartiteGraph g = build_Guv(
            t1, u, t2, v,
            [&](int a, int b) { return ref.table[a][b]; });
        Matching m = g.edges.empty() ? Matching{} : mwm_exact(g);

        int self_id = w.tree.add_node(same_symbol ? t1.nodes[u].label : "", parent);
        w.into_t1.push_back(u);
        w.into_t2.push_back(v);
        for (auto [i, j] : m.pairs)
            self(self, t1.nodes[u].children[i], t2.nodes[v].children[j], self_id);
        return self_id;
    };
    int root = rec(rec, t1.root, t2.root, -1);
    w.tree.root = root;
    return w;
}

// ---------------------------------------------------------------------
// The colored multigraph of a path pair, built literally from the
// three construction cases. Standalone: the fast engine computes the
// equivalent per-pair quantities inline (see mast_fast.hpp).
// ---------------------------------------------------------------------

struct GpqResult {
    MamMultigraph graph;
    std::vector<int> left_nodes;   // position -> t1 node, root-first
    std::vector<int> right_nodes;  // position -> t2 node, root-first
};

// mast_of(a, b) must give the agreement value of the subtrees rooted at
// a in t1 and b in t2; mu is the per-symbol junction bonus (default 1).
template <typename Table>
GpqResult build_GPQ(const LabeledTree& t1, const CentroidDecomposition& d1,
                    int pid, const LabeledTree& t2,
                    const CentroidDecomposition& d2, int qid, Table&& mast_of,
                    const std::map<std::string, std::int64_t>* mu = nullptr) {
    GpqResult res;
    res.left_nodes = d1.paths[pid];
    res.right_nodes = d2.paths[qid];
    res.graph.p = static_cast<int>(res.left_nodes.size());
    res.graph.q = static_cast<int>(res.right_nodes.size());

    auto pairs_by_q = inp(t1, d1, pid, t2, d2);
    auto it = pairs_by_q.find(qid);
    if (it == pairs_by_q.end()) return res;

    auto mu_of = [&](const std::string& z) -> std::int64_t {
        if (!mu) return 1;
        auto f = mu->find(z);
        return f == mu->end() ? 1 : f->second;
    };

    for (auto [u, v] : it->second) {
        int i = d1.pos_in_path[u] + 1;
        int j = d2.pos_in_path[v] + 1;

        std::int64_t max_r = 0, max_l = 0;
        for (int c : d2.side_children(t2, v))
            max_r = std::max(max_r, mast_of(u, c));
        for (int c : d1.side_children(t1, u))
            max_l = std::max(max_l, mast_of(c, v));

        bool lab_u = t1.labeled(u), lab_v = t2.labeled(v);
        if (!lab_u && !lab_v) {
            std::int64_t wh = 0, gr = 0;
            BipartiteGraph h =
                build_Huv(t1, u, d1.heavy[u], t2, v, d2.heavy[v], mast_of);
            if (!h.edges.empty()) wh = mwm_exact(h).weight;
            BipartiteGraph hp =
                build_Hpuv(t1, u, d1.heavy[u], t2, v, d2.heavy[v], mast_of);
            if (!hp.edges.empty()) gr = mwm_exact(hp).weight;
            res.graph.edges.push_back({i, j, MamColor::kWhite, wh});
            res.graph.edges.push_back({i, j, MamColor::kGray, gr});
            res.graph.edges.push_back({i, j, MamColor::kGreen, max_r});
            res.graph.edges.push_back({i, j, MamColor::kRed, max_l});
        } else if (lab_u && lab_v && t1.nodes[u].label == t2.nodes[v].label) {
            std::int64_t bonus = mu_of(t1.nodes[u].label);
            BipartiteGraph h =
                build_Huv(t1, u, d1.heavy[u], t2, v, d2.heavy[v], mast_of);
            std::int64_t wh = (h.edges.empty() ? 0 : mwm_exact(h).weight) + bonus;
            BipartiteGraph hp =
                build_Hpuv(t1, u, d1.heavy[u], t2, v, d2.heavy[v], mast_of);
            std::int64_t gr =
                std::max({(hp.edges.empty() ? 0 : mwm_exact(hp).weight) + bonus,
                          max_r, max_l});
            res.graph.edges.push_back({i, j, MamColor::kWhite, wh});
            res.graph.edges.push_back({i, j, MamColor::kGray, gr});
        } else {
            res.graph.edges.push_back(
                {i, j, MamColor::kGray, std::max(max_r, max_l)});
        }
    }
    return res;
}

}  // namespace treematch
