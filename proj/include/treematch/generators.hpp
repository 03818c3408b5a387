#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "treematch/bigraph.hpp"
#include "treematch/hier.hpp"
#include "treematch/ltree.hpp"
#include "treematch/mam.hpp"

namespace treematch {

// All generators draw from a caller-owned mt19937_64 through the helpers
// below (no std distributions), so identical seeds give identical
// instances on every platform.
inline std::uint64_t rand_below(std::mt19937_64& rng, std::uint64_t n) {
    return n == 0 ? 0 : rng() % n;
}

inline std::int64_t rand_range(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rand_below(rng, hi - lo + 1));
}

// Random bipartite graph with no isolated nodes and weights in [1, max_w].
inline BipartiteGraph random_bigraph(std::mt19937_64& rng, int max_x, int max_y,
                                     std::int64_t max_w) {
    BipartiteGraph g;
    g.x_count = static_cast<int>(rand_range(rng, 1, max_x));
    g.y_count = static_cast<int>(rand_range(rng, 1, max_y));
    std::set<std::pair<int, int>> seen;
    auto add = [&](int x, int y) {
        if (seen.insert({x, y}).second)
            g.add_edge(x, y, rand_range(rng, 1, max_w));
    };
    // cover both sides, then sprinkle extras
    for (int x = 0; x < g.x_count; ++x)
        add(x, static_cast<int>(rand_below(rng, g.y_count)));
    for (int y = 0; y < g.y_count; ++y)
        add(static_cast<int>(rand_below(rng, g.x_count)), y);
    std::int64_t extras =
        rand_below(rng, static_cast<std::uint64_t>(g.x_count) * g.y_count + 1);
    for (std::int64_t i = 0; i < extras; ++i)
        add(static_cast<int>(rand_below(rng, g.x_count)),
            static_cast<int>(rand_below(rng, g.y_count)));
    return g;
}

// Random attachment topology with a cap on the number of children.
inline LabeledTree random_topology(std::mt19937_64& rng, int n, int max_degree) {
    LabeledTree t;
    t.root = t.add_node("", -1);
    std::vector<int> eligible = {0};
    for (int i = 1; i < n; ++i) {
        std::size_t pick = rand_below(rng, eligible.size());
        int parent = eligible[pick];
        int id = t.add_node("", parent);
        if (static_cast<int>(t.nodes[parent].children.size()) >= max_degree) {
            eligible[pick] = eligible.back();
            eligible.pop_back();
        }
        eligible.push_back(id);
    }
    return t;
}

// Random valid hierarchical instance: weights accumulate bottom-up so the
// parent-dominates-children invariant holds, per-child edges stay within
// the child's weight budget, and right-side indices are compacted so no
// node is isolated.
inline HierInstance random_hier_instance(std::mt19937_64& rng, int max_nodes,
                                         int max_degree = 5,
                                         std::int64_t leaf_weight_max = 5,
                                         std::int64_t slack_max = 4) {
    int n = 1 + static_cast<int>(rand_below(rng, max_nodes));
    LabeledTree shape = random_topology(rng, n, max_degree);

    HierInstance inst;
    inst.nodes.resize(n);
    inst.root = shape.root;
    for (int u = 0; u < n; ++u) {
        inst.nodes[u].id = u;
        inst.nodes[u].children = shape.nodes[u].children;
    }
    auto order = shape.preorder();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        auto& node = inst.nodes[*it];
        if (node.children.empty()) {
            node.weight = rand_range(rng, 1, leaf_weight_max);
            continue;
        }
        std::int64_t sum = 0;
        for (int c : node.children) sum += inst.nodes[c].weight;
        node.weight = sum + rand_below(rng, slack_max + 1);

        node.graph.x_count = static_cast<int>(node.children.size());
        int y_slots = 1 + static_cast<int>(rand_below(rng, node.children.size() + 2));
        std::vector<int> y_map(y_slots, -1);
        int used = 0;
        for (std::size_t i = 0; i < node.children.size(); ++i) {
            std::int64_t budget = inst.nodes[node.children[i]].weight;
            int fan = 1 + static_cast<int>(rand_below(
                              rng, std::min<std::int64_t>(y_slots, std::min<std::int64_t>(budget, 3))));
            std::set<int> targets;
            while (static_cast<int>(targets.size()) < fan)
                targets.insert(static_cast<int>(rand_below(rng, y_slots)));
            std::int64_t share = budget / fan;  // fan <= budget, so share >= 1
            for (int slot : targets) {
                std::int64_t w = rand_range(rng, 1, share);
                if (y_map[slot] < 0) y_map[slot] = used++;
                node.graph.add_edge(static_cast<int>(i), y_map[slot], w);
            }
        }
        node.graph.y_count = used;
    }
    return inst;
}

// Random case-shaped colored multigraph with at most max_edges edges.
inline MamMultigraph random_mam(std::mt19937_64& rng, int max_p, int max_q,
                                int max_edges, std::int64_t max_w) {
    MamMultigraph g;
    g.p = static_cast<int>(rand_range(rng, 1, max_p));
    g.q = static_cast<int>(rand_range(rng, 1, max_q));
    std::set<std::pair<int, int>> used;
    int budget = max_edges;
    int attempts = 2 * max_edges;
    while (budget > 0 && attempts-- > 0) {
        int i = static_cast<int>(rand_range(rng, 1, g.p));
        int j = static_cast<int>(rand_range(rng, 1, g.q));
        if (!used.insert({i, j}).second) continue;
        int kase = static_cast<int>(rand_below(rng, 3));
        std::vector<MamColor> colors;
        if (kase == 0)
            colors = {MamColor::kWhite, MamColor::kGray, MamColor::kGreen,
                      MamColor::kRed};
        else if (kase == 1)
            colors = {MamColor::kWhite, MamColor::kGray};
        else
            colors = {MamColor::kGray};
        if (static_cast<int>(colors.size()) > budget) continue;
        for (MamColor c : colors) {
            g.edges.push_back({i, j, c, rand_range(rng, 0, max_w)});
            --budget;
        }
    }
    return g;
}

enum class TreeFamily { kEvolutionary, kUniform, kRandomLabeled };

inline const char* family_name(TreeFamily f) {
    switch (f) {
        case TreeFamily::kEvolutionary: return "evolutionary";
        case TreeFamily::kUniform: return "uniform";
        default: return "random-labeled";
    }
}

// evolutionary: random topology, distinct symbols on the leaves;
// uniform: every node carries the same symbol;
// random-labeled: each node unlabeled with probability unlabeled_pct/100,
// otherwise labeled from an alphabet of the given size.
inline LabeledTree random_labeled_tree(std::mt19937_64& rng, TreeFamily family,
                                       int n, int max_degree,
                                       int alphabet = 8, int unlabeled_pct = 30) {
    LabeledTree t = random_topology(rng, n, max_degree);
    switch (family) {
        case TreeFamily::kEvolutionary: {
            int next = 0;
            for (auto& node : t.nodes)
                if (node.children.empty()) node.label = "t" + std::to_string(next++);
            break;
        }
        case TreeFamily::kUniform:
            for (auto& node : t.nodes) node.label = "a";
            break;
        case TreeFamily::kRandomLabeled:
            for (auto& node : t.nodes) {
                if (rand_below(rng, 100) < static_cast<std::uint64_t>(unlabeled_pct))
                    node.label.clear();
                else
                    node.label = "L" + std::to_string(rand_below(rng, alphabet));
            }
            break;
    }
    return t;
}

}  // namespace treematch
