#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "treematch/hier.hpp"
#include "treematch/ltree.hpp"
#include "treematch/mast.hpp"

namespace treematch {

// Accelerated engine. Centroid paths of the first tree are processed
// bottom-up; the stage of a path P with root r computes
// mast(T1^r, (T2||T1^r)^v) for every node v of the restricted tree from
// the finished tables of the side-child stages. Inside a stage, the
// matchings of the heavy-stripped child graphs H_uv are produced in bulk
// by the hierarchical matching solver over T2||B_u, and the values along
// each path pair (P,Q) come from a suffix DP whose terms mirror the
// agreement-matching decomposition: skip moves, side-tree caps in either
// tree, a junction continued through both heavy children (white), and a
// terminal junction matching that avoids pairing the heavy children with
// each other (gray).
class MastFastEngine {
 public:
    MastFastEngine(const LabeledTree& t1, const LabeledTree& t2)
        : t1_(t1), t2_(t2) {}

    std::int64_t run() {
        if (t1_.empty() || t2_.empty()) return 0;
        d1_ = centroid_decompose(t1_);
        lca2_ = EulerLca(t2_);
        tbl_.assign(d1_.paths.size(), {});

        auto depth1 = t1_.depths();
        std::vector<int> order(d1_.paths.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            int da = depth1[d1_.root_of(a)], db = depth1[d1_.root_of(b)];
            if (da != db) return da > db;  // deepest roots first
            return a < b;
        });

        std::int64_t answer = 0;
        for (int pid : order) {
            std::int64_t stage_root_value = run_stage(pid);
            if (d1_.root_of(pid) == t1_.root) answer = stage_root_value;
        }
        return answer;
    }

 private:
    struct SideData {
        int child = -1;                  // side child of u in t1
        std::vector<std::int64_t> mu;    // R-local node -> mast(T1^child, T2^node)
    };

    // value table of a finished stage: t2 node id -> mast(T1^{r(P)}, T2^v)
    std::vector<std::unordered_map<int, std::int64_t>> tbl_;

    const LabeledTree& t1_;
    const LabeledTree& t2_;
    CentroidDecomposition d1_;
    EulerLca lca2_;

    static void collect_subtree_labels(const LabeledTree& t, int root,
                                       std::set<std::string>& out) {
        std::vector<int> stack = {root};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (!t.nodes[v].label.empty()) out.insert(t.nodes[v].label);
            for (int c : t.nodes[v].children) stack.push_back(c);
        }
    }

    // R-local child of rv whose subtree contains rt (children are stored
    // in tin order)
    static int child_toward(const LabeledTree& rtree, const EulerLca& rlca,
                            int rv, int rt) {
        const auto& ch = rtree.nodes[rv].children;
        int lo = 0, hi = static_cast<int>(ch.size()) - 1, best = -1;
        while (lo <= hi) {
            int mid = (lo + hi) / 2;
            if (rlca.tin(ch[mid]) <= rlca.tin(rt)) {
                best = ch[mid];
                lo = mid + 1;
            } else {
                hi = mid - 1;
            }
        }
        return best;
    }

    // returns the value at the root of the stage's restricted tree
    std::int64_t run_stage(int pid) {
        const auto& P = d1_.paths[pid];
        const int p = static_cast<int>(P.size());
        const int r = P[0];

        std::set<std::string> lr;
        collect_subtree_labels(t1_, r, lr);
        RestrictedTree R = restrict_tree(t2_, lca2_, lr);
        if (R.tree.empty()) return 0;

        CentroidDecomposition dr = centroid_decompose(R.tree);
        EulerLca rlca(R.tree);
        const int rn = R.tree.size();

        // label interning across t1 path nodes and R nodes
        std::unordered_map<std::string, int> sym;
        auto sym_of = [&](const std::string& s) -> int {
            if (s.empty()) return -1;
            auto [it, fresh] = sym.try_emplace(s, static_cast<int>(sym.size()));
            (void)fresh;
            return it->second;
        };
        std::vector<int> lab_u(p), lab_v(rn);
        for (int a = 0; a < p; ++a) lab_u[a] = sym_of(t1_.nodes[P[a]].label);
        for (int rv = 0; rv < rn; ++rv) lab_v[rv] = sym_of(R.tree.nodes[rv].label);

        std::vector<int> rpost = R.tree.preorder();
        std::reverse(rpost.begin(), rpost.end());

        // ---- per-u precomputation -------------------------------------
        std::vector<std::vector<SideData>> sides(p);
        // H values, keyed by R-local id; present iff the node is in T2||B_u
        std::vector<std::unordered_map<int, std::int64_t>> hval(p);
        // fallback data: top T2||B_u node below each R node (R-local, -1 none)
        std::vector<std::vector<int>> tu_top(p);

        for (int a = 0; a < p; ++a) {
            int u = P[a];
            std::vector<int> side = d1_.side_children(t1_, u);
            sides[a].reserve(side.size());
            for (int x : side) {
                SideData sd;
                sd.child = x;
                sd.mu.assign(rn, 0);
                const auto& table = tbl_[d1_.path_of[x]];
                for (int rv : rpost) {
                    auto it = table.find(R.to_original[rv]);
                    if (it != table.end()) {
                        sd.mu[rv] = it->second;
                        continue;
                    }
                    // value of the unique side-table node below, if any
                    std::int64_t val = 0;
                    for (int rc : R.tree.nodes[rv].children)
                        val = std::max(val, sd.mu[rc]);
                    sd.mu[rv] = val;
                }
                sides[a].push_back(std::move(sd));
            }
            if (side.empty()) {
                tu_top[a].assign(rn, -1);
                continue;
            }

            std::set<std::string> bu;
            std::unordered_map<std::string, std::int64_t> count_s;
            for (int x : side) {
                std::vector<int> stack = {x};
                while (!stack.empty()) {
                    int v = stack.back();
                    stack.pop_back();
                    if (!t1_.nodes[v].label.empty()) {
                        bu.insert(t1_.nodes[v].label);
                        count_s[t1_.nodes[v].label]++;
                    }
                    for (int c : t1_.nodes[v].children) stack.push_back(c);
                }
            }
            RestrictedTree tu = restrict_tree(R.tree, rlca, bu);
            tu_top[a].assign(rn, -1);
            for (int rv : rpost) {
                if (tu.to_restricted.count(rv)) {
                    tu_top[a][rv] = rv;
                    continue;
                }
                for (int rc : R.tree.nodes[rv].children)
                    if (tu_top[a][rc] >= 0) tu_top[a][rv] = tu_top[a][rc];
            }
            if (tu.tree.empty()) continue;

            // hierarchical instance over T2||B_u: node weights are the
            // pair counts against the side trees of u, the attached graph
            // of v matches u's side children against v's side children
            HierInstance inst;
            inst.nodes.resize(tu.tree.size());
            inst.root = tu.tree.root;
            std::vector<std::int64_t> local(tu.tree.size(), 0);
            for (int tv = 0; tv < tu.tree.size(); ++tv) {
                const std::string& lbl = tu.tree.nodes[tv].label;
                if (!lbl.empty()) {
                    auto it = count_s.find(lbl);
                    if (it != count_s.end()) local[tv] = it->second;
                }
            }
            auto tpost = tu.tree.preorder();
            std::reverse(tpost.begin(), tpost.end());
            std::vector<std::int64_t> delta_w = local;
            for (int tv : tpost)
                for (int tc : tu.tree.nodes[tv].children) delta_w[tv] += delta_w[tc];

            for (int tv = 0; tv < tu.tree.size(); ++tv) {
                auto& node = inst.nodes[tv];
                node.id = tv;
                node.weight = std::max<std::int64_t>(delta_w[tv], 1);
                node.children = tu.tree.nodes[tv].children;
                node.graph.x_count = static_cast<int>(node.children.size());
                node.graph.y_count = static_cast<int>(sides[a].size());
                int rv = tu.to_original[tv];
                for (int ci = 0; ci < node.graph.x_count; ++ci) {
                    int rt = tu.to_original[node.children[ci]];
                    int rc = child_toward(R.tree, rlca, rv, rt);
                    if (rc < 0 || rc == dr.heavy[rv]) continue;
                    for (std::size_t si = 0; si < sides[a].size(); ++si) {
                        std::int64_t w = sides[a][si].mu[rc];
                        if (w > 0)
                            node.graph.add_edge(ci, static_cast<int>(si), w);
                    }
                }
            }
            auto solved = solve_hierarchical(inst, /*strict=*/false);
            auto& hv = hval[a];
            for (int tv = 0; tv < tu.tree.size(); ++tv) hv[tu.to_original[tv]] = 0;
            for (const auto& [tv, m] : solved) hv[tu.to_original[tv]] = m.weight;
        }

        // ---- path-pair DP ---------------------------------------------
        // firstcol[qid][a] = mast(T1^{u_a}, R^{root of Q_qid})
        std::vector<std::vector<std::int64_t>> firstcol(dr.paths.size());
        auto depth_r = R.tree.depths();
        std::vector<int> qorder(dr.paths.size());
        for (std::size_t i = 0; i < qorder.size(); ++i) qorder[i] = static_cast<int>(i);
        std::sort(qorder.begin(), qorder.end(), [&](int x, int y) {
            int dx = depth_r[dr.root_of(x)], dy = depth_r[dr.root_of(y)];
            if (dx != dy) return dx > dy;
            return x < y;
        });

        BipartiteGraph scratch;
        std::int64_t root_value = 0;
        for (int qid : qorder) {
            const auto& Q = dr.paths[qid];
            const int q = static_cast<int>(Q.size());
            std::vector<std::int64_t> V(static_cast<std::size_t>(p + 1) * (q + 1), 0);
            auto at = [&](int a, int b) -> std::int64_t& {
                return V[static_cast<std::size_t>(a) * (q + 1) + b];
            };

            for (int a = p - 1; a >= 0; --a) {
                int u = P[a];
                for (int b = q - 1; b >= 0; --b) {
                    int rv = Q[b];
                    std::int64_t best = std::max(at(a + 1, b), at(a, b + 1));

                    for (int rc : R.tree.nodes[rv].children)
                        if (rc != dr.heavy[rv])
                            best = std::max(best, firstcol[dr.path_of[rc]][a]);
                    for (const auto& sd : sides[a])
                        best = std::max(best, sd.mu[rv]);

                    bool compat = lab_u[a] == lab_v[rv] ||
                                  (lab_u[a] < 0 && lab_v[rv] < 0);
                    if (compat) {
                        std::int64_t bonus = (lab_u[a] >= 0 && lab_u[a] == lab_v[rv]) ? 1 : 0;
                        std::int64_t hv;
                        auto it = hval[a].find(rv);
                        if (it != hval[a].end())
                            hv = it->second;
                        else
                            hv = trivial_h(R, rlca, dr, sides[a], tu_top[a], rv);
                        best = std::max(best, hv + bonus + at(a + 1, b + 1));

                        // terminal junction: children matching that never
                        // pairs the two heavy children together
                        scratch.edges.clear();
                        const auto& cols = R.tree.nodes[rv].children;
                        int rows = static_cast<int>(sides[a].size());
                        bool has_hu = a + 1 < p;
                        scratch.x_count = rows + (has_hu ? 1 : 0);
                        scratch.y_count = static_cast<int>(cols.size());
                        for (int cj = 0; cj < scratch.y_count; ++cj) {
                            int rc = cols[cj];
                            for (int si = 0; si < rows; ++si) {
                                std::int64_t w = sides[a][si].mu[rc];
                                if (w > 0) scratch.add_edge(si, cj, w);
                            }
                            if (has_hu && rc != dr.heavy[rv]) {
                                std::int64_t w = firstcol[dr.path_of[rc]][a + 1];
                                if (w > 0) scratch.add_edge(rows, cj, w);
                            }
                        }
                        if (!scratch.edges.empty())
                            best = std::max(best, mwm_exact(scratch).weight + bonus);
                    }
                    at(a, b) = best;
                }
            }

            auto& fc = firstcol[qid];
            fc.resize(p);
            for (int a = 0; a < p; ++a) fc[a] = at(a, 0);
            auto& table = tbl_[pid];
            for (int b = 0; b < q; ++b) table[R.to_original[Q[b]]] = at(0, b);
            if (Q[0] == R.tree.root) root_value = at(0, 0);
        }
        return root_value;
    }

    // H value for a node outside T2||B_u: at most one side-child branch
    // of rv holds labels shared with u's side trees, so the matching is a
    // single best edge into that branch (zero when the branch hangs off
    // the heavy child).
    std::int64_t trivial_h(const RestrictedTree& R, const EulerLca& rlca,
                           const CentroidDecomposition& dr,
                           const std::vector<SideData>& side,
                           const std::vector<int>& top, int rv) const {
        int rt = top[rv];
        if (rt < 0 || rt == rv) return 0;
        int rc = child_toward(R.tree, rlca, rv, rt);
        if (rc < 0 || rc == dr.heavy[rv]) return 0;
        std::int64_t best = 0;
        for (const auto& sd : side) best = std::max(best, sd.mu[rc]);
        return best;
    }
};

inline std::int64_t mast_fast(const LabeledTree& t1, const LabeledTree& t2) {
    return MastFastEngine(t1, t2).run();
}

}  // namespace treematch
