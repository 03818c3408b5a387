#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "treematch/bigraph.hpp"
#include "treematch/matcher.hpp"
#include "treematch/unbalanced.hpp"

namespace treematch {

// Instance of the hierarchical bipartite matching problem: a rooted tree
// whose nodes carry positive integer weights and, at internal nodes, a
// bipartite graph whose left side is indexed by the children. The child
// weights cap the edge weight incident to each child, so the total edge
// weight of a node's graph is at most the node's own weight.
struct HierInstance {
    struct Node {
        std::int64_t id = 0;
        std::int64_t weight = 1;
        std::vector<int> children;  // indices into nodes
        BipartiteGraph graph;       // x side indexed by children
    };

    std::vector<Node> nodes;
    int root = 0;

    int size() const { return static_cast<int>(nodes.size()); }
    bool internal(int u) const { return !nodes[u].children.empty(); }

    // b = max over nodes of the smaller side of the attached graph
    int b() const {
        int r = 0;
        for (const auto& n : nodes)
            if (!n.children.empty())
                r = std::max(r, std::min(n.graph.x_count, n.graph.y_count));
        return r;
    }

    std::int64_t edge_total() const {
        std::int64_t e = 0;
        for (const auto& n : nodes) e += static_cast<std::int64_t>(n.graph.edges.size());
        return e;
    }
};

inline Violation validate_instance(const HierInstance& h) {
    if (h.nodes.empty()) return {false, "empty instance"};
    std::vector<int> indeg(h.size(), 0);
    for (int u = 0; u < h.size(); ++u) {
        const auto& n = h.nodes[u];
        if (n.weight < 1) return {false, "nonpositive node weight"};
        for (int c : n.children) {
            if (c < 0 || c >= h.size()) return {false, "child index out of range"};
            indeg[c]++;
        }
    }
    if (indeg[h.root] != 0) return {false, "root has a parent"};
    for (int u = 0; u < h.size(); ++u)
        if (u != h.root && indeg[u] != 1) return {false, "not a tree"};

    for (int u = 0; u < h.size(); ++u) {
        const auto& n = h.nodes[u];
        if (n.children.empty()) {
            if (!n.graph.edges.empty()) return {false, "leaf carries a graph"};
            continue;
        }
        std::int64_t child_sum = 0;
        for (int c : n.children) child_sum += h.nodes[c].weight;
        if (n.weight < child_sum)
            return {false, "node weight below sum of child weights"};
        if (n.graph.x_count != static_cast<int>(n.children.size()))
            return {false, "graph x side does not match child count"};
        Violation v = validate(n.graph);
        if (!v.ok) return v;
        std::vector<std::int64_t> incident(n.children.size(), 0);
        for (const auto& e : n.graph.edges) incident[e.x] += e.w;
        for (std::size_t i = 0; i < n.children.size(); ++i)
            if (incident[i] > h.nodes[n.children[i]].weight)
                return {false, "child edge weight sum exceeds child weight"};
    }
    return {};
}

// Second largest child weight; 0 when u has fewer than two children.
inline std::int64_t secw(const HierInstance& h, int u) {
    const auto& ch = h.nodes[u].children;
    if (ch.size() < 2) return 0;
    std::int64_t first = 0, second = 0;
    for (int c : ch) {
        std::int64_t w = h.nodes[c].weight;
        if (w >= first) {
            second = first;
            first = w;
        } else if (w > second) {
            second = w;
        }
    }
    return second;
}

// B has critical degree h if every node of B has at most h children of
// weight at least min_{u in B} w(u).
inline bool critical_degree_holds(const HierInstance& inst,
                                  const std::vector<int>& B, std::int64_t h) {
    if (B.empty()) throw std::invalid_argument("critical_degree_holds: empty set");
    std::int64_t delta = std::numeric_limits<std::int64_t>::max();
    for (int u : B) delta = std::min(delta, inst.nodes[u].weight);
    for (int u : B) {
        std::int64_t heavy = 0;
        for (int c : inst.nodes[u].children)
            if (inst.nodes[c].weight >= delta) ++heavy;
        if (heavy > h) return false;
    }
    return true;
}

// Per-node matchings for a critical set: children at least as heavy as
// the set minimum become hubs, the rest is matched by the pruned sweep,
// and the hubs are reinserted afterwards.
inline std::map<int, Matching> solve_critical_set(const HierInstance& inst,
                                                  const std::vector<int>& B,
                                                  std::int64_t h) {
    if (!critical_degree_holds(inst, B, h))
        throw std::invalid_argument("solve_critical_set: critical degree violated");
    std::int64_t delta = std::numeric_limits<std::int64_t>::max();
    for (int u : B) delta = std::min(delta, inst.nodes[u].weight);

    std::map<int, Matching> out;
    for (int u : B) {
        const auto& node = inst.nodes[u];
        std::vector<int> hubs;
        for (std::size_t i = 0; i < node.children.size(); ++i)
            if (inst.nodes[node.children[i]].weight >= delta)
                hubs.push_back(static_cast<int>(i));
        BipartiteGraph rest = node.graph;
        rest.edges.clear();
        std::vector<char> is_hub(node.graph.x_count, 0);
        for (int x : hubs) is_hub[x] = 1;
        for (const auto& e : node.graph.edges)
            if (!is_hub[e.x]) rest.edges.push_back(e);
        Matching m0 = mwm_pruned(rest);
        out[u] = recover_with_hubs(node.graph, hubs, m0);
    }
    return out;
}

// Classification of the internal nodes: big-secw nodes split into the
// doubling classes phi[k], the rest by weight into pi_prime (above b^3)
// and the twenty-one seventh-root bands, with degenerate nodes (b <= 2,
// unit weight, fewer than two children) solved directly as residual.
struct NodeClassification {
    std::map<int, std::vector<int>> phi;      // k >= 1
    std::vector<int> pi_prime;
    std::array<std::vector<int>, 21> pi;
    std::vector<int> residual;
};

namespace detail {

// w <= floor(b^(k/7))  <=>  w^7 <= b^k, exactly
inline bool at_most_pow7(std::int64_t w, std::int64_t b, int k) {
    namespace mp = boost::multiprecision;
    mp::cpp_int lhs = mp::pow(mp::cpp_int(w), 7);
    mp::cpp_int rhs = mp::pow(mp::cpp_int(b), static_cast<unsigned>(k));
    return lhs <= rhs;
}

}  // namespace detail

inline NodeClassification classify_nodes(const HierInstance& inst) {
    NodeClassification cls;
    const std::int64_t b = inst.b();
    using Wide = __int128;
    const Wide b3 = static_cast<Wide>(b) * b * b;

    for (int u = 0; u < inst.size(); ++u) {
        if (!inst.internal(u)) continue;
        if (b <= 2 || inst.nodes[u].children.size() < 2) {
            cls.residual.push_back(u);
            continue;
        }
        std::int64_t s = secw(inst, u);
        if (static_cast<Wide>(s) > b3) {
            int k = 1;
            Wide bound = 2 * b3;
            while (static_cast<Wide>(s) > bound) {
                bound *= 2;
                ++k;
            }
            cls.phi[k].push_back(u);
            continue;
        }
        std::int64_t w = inst.nodes[u].weight;
        if (static_cast<Wide>(w) > b3) {
            cls.pi_prime.push_back(u);
            continue;
        }
        if (w <= 1) {
            cls.residual.push_back(u);
            continue;
        }
        bool placed = false;
        for (int k = 0; k <= 20; ++k) {
            if (!detail::at_most_pow7(w, b, k) && detail::at_most_pow7(w, b, k + 1)) {
                cls.pi[k].push_back(u);
                placed = true;
                break;
            }
        }
        if (!placed) cls.residual.push_back(u);  // unreachable for valid b,w
    }
    return cls;
}

// mwm(G_u) for every internal node, routed per class: residual directly,
// phi classes via top-child removal and hub recovery over the pruned
// edge set, pi classes via the critical-set solver.
inline std::map<int, Matching> solve_hierarchical(const HierInstance& inst,
                                                  bool strict = true) {
    if (strict) {
        Violation v = validate_instance(inst);
        if (!v.ok)
            throw std::invalid_argument("solve_hierarchical: " + v.message);
    }
    NodeClassification cls = classify_nodes(inst);
    std::map<int, Matching> out;

    for (int u : cls.residual) out[u] = mwm_exact(inst.nodes[u].graph);

    for (const auto& [k, nodes] : cls.phi) {
        (void)k;
        for (int u : nodes) {
            const auto& node = inst.nodes[u];
            BipartiteGraph pruned = prune_top_ns(node.graph);
            int hub = 0;
            for (std::size_t i = 1; i < node.children.size(); ++i)
                if (inst.nodes[node.children[i]].weight >
                    inst.nodes[node.children[hub]].weight)
                    hub = static_cast<int>(i);
            BipartiteGraph rest = pruned;
            rest.edges.clear();
            for (const auto& e : pruned.edges)
                if (e.x != hub) rest.edges.push_back(e);
            Matching m0 = mwm_partition_sweep(rest);
            out[u] = recover_with_hubs(pruned, {hub}, m0);
        }
    }

    if (!cls.pi_prime.empty())
        for (auto& [u, m] : solve_critical_set(inst, cls.pi_prime, 1))
            out[u] = std::move(m);

    const std::int64_t b = inst.b();
    std::int64_t h7 = 1;
    while (detail::at_most_pow7(h7 + 1, b, 1)) ++h7;  // floor(b^(1/7))
    for (int k = 0; k <= 20; ++k) {
        if (cls.pi[k].empty()) continue;
        for (auto& [u, m] : solve_critical_set(inst, cls.pi[k], h7))
            out[u] = std::move(m);
    }
    return out;
}

// JSON document: {"nodes":[{id, weight, children:[ids],
// graph:{y_count, edges:[[child_id,y,w],...]}}, ...]}, root listed first.
inline HierInstance parse_hier_instance(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    if (!doc.contains("nodes") || !doc["nodes"].is_array() || doc["nodes"].empty())
        throw std::runtime_error("hier instance: missing nodes array");

    HierInstance inst;
    std::map<std::int64_t, int> index_of;
    for (const auto& jn : doc["nodes"]) {
        HierInstance::Node n;
        n.id = jn.at("id").get<std::int64_t>();
        n.weight = jn.at("weight").get<std::int64_t>();
        if (index_of.count(n.id)) throw std::runtime_error("duplicate node id");
        index_of[n.id] = inst.size();
        inst.nodes.push_back(std::move(n));
    }
    int pos = 0;
    for (const auto& jn : doc["nodes"]) {
        auto& n = inst.nodes[pos++];
        std::map<std::int64_t, int> child_x;
        if (jn.contains("children"))
            for (const auto& c : jn["children"]) {
                std::int64_t cid = c.get<std::int64_t>();
                auto it = index_of.find(cid);
                if (it == index_of.end())
                    throw std::runtime_error("unknown child id " + std::to_string(cid));
                child_x[cid] = static_cast<int>(n.children.size());
                n.children.push_back(it->second);
            }
        n.graph.x_count = static_cast<int>(n.children.size());
        if (jn.contains("graph") && !jn["graph"].is_null()) {
            const auto& jg = jn["graph"];
            n.graph.y_count = jg.at("y_count").get<int>();
            for (const auto& je : jg.at("edges")) {
                std::int64_t cid = je.at(0).get<std::int64_t>();
                auto it = child_x.find(cid);
                if (it == child_x.end())
                    throw std::runtime_error("graph edge references non-child id " +
                                             std::to_string(cid));
                n.graph.add_edge(it->second, je.at(1).get<int>(),
                                 je.at(2).get<std::int64_t>());
            }
        }
    }
    inst.root = 0;
    return inst;
}

inline std::string write_hier_instance(const HierInstance& inst) {
    nlohmann::json nodes = nlohmann::json::array();
    // emit root first, then the rest in index order
    std::vector<int> order;
    order.push_back(inst.root);
    for (int u = 0; u < inst.size(); ++u)
        if (u != inst.root) order.push_back(u);
    for (int u : order) {
        const auto& n = inst.nodes[u];
        nlohmann::json jn;
        jn["id"] = n.id;
        jn["weight"] = n.weight;
        nlohmann::json ch = nlohmann::json::array();
        for (int c : n.children) ch.push_back(inst.nodes[c].id);
        jn["children"] = ch;
        if (!n.children.empty()) {
            nlohmann::json edges = nlohmann::json::array();
            for (const auto& e : n.graph.edges)
                edges.push_back({inst.nodes[n.children[e.x]].id, e.y, e.w});
            jn["graph"] = {{"y_count", n.graph.y_count}, {"edges", edges}};
        }
        nodes.push_back(jn);
    }
    return nlohmann::json{{"nodes", nodes}}.dump();
}

}  // namespace treematch
