#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace treematch {

// Rooted ordered tree with an arbitrary subset of nodes labeled. Labels
// may repeat and internal nodes may be labeled; the empty string means
// unlabeled.
struct LabeledTree {
    struct Node {
        std::string label;
        std::vector<int> children;
        int parent = -1;
    };

    std::vector<Node> nodes;
    int root = -1;

    int size() const { return static_cast<int>(nodes.size()); }
    bool empty() const { return nodes.empty(); }
    bool labeled(int v) const { return !nodes[v].label.empty(); }

    int degree() const {
        int d = 0;
        for (const auto& n : nodes) d = std::max<int>(d, n.children.size());
        return d;
    }

    int labeled_count() const {
        int c = 0;
        for (const auto& n : nodes)
            if (!n.label.empty()) ++c;
        return c;
    }

    int add_node(const std::string& label, int parent) {
        nodes.push_back({label, {}, parent});
        int id = size() - 1;
        if (parent >= 0) nodes[parent].children.push_back(id);
        return id;
    }

    // Nodes in preorder (parents before children, children in order).
    std::vector<int> preorder() const {
        std::vector<int> order, stack;
        if (root >= 0) stack.push_back(root);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            order.push_back(v);
            const auto& ch = nodes[v].children;
            for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
        }
        return order;
    }

    std::vector<int> subtree_sizes() const {
        std::vector<int> sz(size(), 1);
        auto order = preorder();
        for (auto it = order.rbegin(); it != order.rend(); ++it)
            for (int c : nodes[*it].children) sz[*it] += sz[c];
        return sz;
    }

    std::vector<int> depths() const {
        std::vector<int> d(size(), 0);
        for (int v : preorder())
            if (nodes[v].parent >= 0) d[v] = d[nodes[v].parent] + 1;
        return d;
    }
};

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " at position " + std::to_string(pos)),
          position(pos) {}
};

// Grammar: tree := node ';'
//          node := '(' node (',' node)* ')' label? | label
//          label := [A-Za-z0-9_]+ | '*'        (absent or '*' = unlabeled)
inline LabeledTree parse_tree(const std::string& text) {
    LabeledTree t;
    std::size_t pos = 0;

    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    };
    auto is_label_char = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    // optional label; '*' and absence both mean unlabeled
    auto read_opt_label = [&]() -> std::string {
        skip_ws();
        if (pos < text.size() && text[pos] == '*') {
            ++pos;
            return "";
        }
        std::size_t start = pos;
        while (pos < text.size() && is_label_char(text[pos])) ++pos;
        return text.substr(start, pos - start);
    };

    auto parse_node = [&](auto&& self, int parent) -> int {
        skip_ws();
        if (pos >= text.size()) throw ParseError("unexpected end of input", pos);
        if (text[pos] == '(') {
            ++pos;
            int id = t.add_node("", parent);
            while (true) {
                self(self, id);
                skip_ws();
                if (pos >= text.size()) throw ParseError("unterminated '('", pos);
                if (text[pos] == ',') {
                    ++pos;
                    continue;
                }
                if (text[pos] == ')') {
                    ++pos;
                    break;
                }
                throw ParseError("expected ',' or ')'", pos);
            }
            t.nodes[id].label = read_opt_label();
            return id;
        }
        if (text[pos] == '*') {
            ++pos;
            return t.add_node("", parent);
        }
        if (!is_label_char(text[pos])) throw ParseError("expected node", pos);
        std::size_t start = pos;
        while (pos < text.size() && is_label_char(text[pos])) ++pos;
        return t.add_node(text.substr(start, pos - start), parent);
    };

    t.root = parse_node(parse_node, -1);
    skip_ws();
    if (pos >= text.size() || text[pos] != ';')
        throw ParseError("expected ';'", pos);
    ++pos;
    skip_ws();
    if (pos != text.size()) throw ParseError("trailing input", pos);
    return t;
}

// Canonical form: children in stored order, '*' for every unlabeled node.
inline void serialize_node(const LabeledTree& t, int v, std::string& out) {
    const auto& n = t.nodes[v];
    if (!n.children.empty()) {
        out += '(';
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            if (i) out += ',';
            serialize_node(t, n.children[i], out);
        }
        out += ')';
    }
    out += n.label.empty() ? "*" : n.label;
}

inline std::string serialize_tree(const LabeledTree& t) {
    std::string out;
    if (t.root >= 0) serialize_node(t, t.root, out);
    out += ';';
    return out;
}

// Number of same-label node pairs, via per-symbol occurrence counts.
inline std::int64_t delta(const LabeledTree& t1, const LabeledTree& t2) {
    std::unordered_map<std::string, std::int64_t> c1;
    for (const auto& n : t1.nodes)
        if (!n.label.empty()) c1[n.label]++;
    std::int64_t d = 0;
    for (const auto& n : t2.nodes) {
        if (n.label.empty()) continue;
        auto it = c1.find(n.label);
        if (it != c1.end()) d += it->second;
    }
    return d;
}

// Euler-tour LCA with a sparse table; also answers ancestor queries.
class EulerLca {
 public:
    EulerLca() = default;

    explicit EulerLca(const LabeledTree& t)
        : tin_(t.size(), 0), tout_(t.size(), 0), depth_(t.size(), 0),
          first_(t.size(), 0) {
        if (t.empty()) return;
        euler_.reserve(2 * t.size());
        // iterative euler tour
        std::vector<std::pair<int, int>> stack;  // node, next child index
        stack.push_back({t.root, 0});
        int timer = 0;
        tin_[t.root] = timer++;
        first_[t.root] = static_cast<int>(euler_.size());
        euler_.push_back(t.root);
        while (!stack.empty()) {
            auto& [v, ci] = stack.back();
            if (ci < static_cast<int>(t.nodes[v].children.size())) {
                int c = t.nodes[v].children[ci++];
                depth_[c] = depth_[v] + 1;
                tin_[c] = timer++;
                first_[c] = static_cast<int>(euler_.size());
                euler_.push_back(c);
                stack.push_back({c, 0});
            } else {
                tout_[v] = timer++;
                stack.pop_back();
                if (!stack.empty()) euler_.push_back(stack.back().first);
            }
        }
        build_table();
    }

    int lca(int a, int b) const {
        int i = first_[a], j = first_[b];
        if (i > j) std::swap(i, j);
        int k = log2_[j - i + 1];
        int u = table_[k][i], v = table_[k][j - (1 << k) + 1];
        return depth_[u] <= depth_[v] ? u : v;
    }

    bool is_ancestor(int a, int b) const {  // a ancestor-or-equal of b
        return tin_[a] <= tin_[b] && tout_[b] <= tout_[a];
    }

    int tin(int v) const { return tin_[v]; }
    int depth(int v) const { return depth_[v]; }

 private:
    void build_table() {
        int m = static_cast<int>(euler_.size());
        log2_.assign(m + 1, 0);
        for (int i = 2; i <= m; ++i) log2_[i] = log2_[i / 2] + 1;
        int levels = log2_[m] + 1;
        table_.assign(levels, std::vector<int>(m));
        table_[0] = euler_;
        for (int k = 1; k < levels; ++k)
            for (int i = 0; i + (1 << k) <= m; ++i) {
                int a = table_[k - 1][i], b = table_[k - 1][i + (1 << (k - 1))];
                table_[k][i] = depth_[a] <= depth_[b] ? a : b;
            }
    }

    std::vector<int> tin_, tout_, depth_, first_, euler_;
    std::vector<int> log2_;
    std::vector<std::vector<int>> table_;
};

// Restricted subtree: nodes labeled from L plus pairwise LCAs, edges
// preserving the ancestor-descendant order of the original tree. Kept
// nodes retain their original labels (which may lie outside L).
struct RestrictedTree {
    LabeledTree tree;
    std::unordered_map<int, int> to_restricted;  // original -> new
    std::vector<int> to_original;                // new -> original
};

inline RestrictedTree restrict_tree(const LabeledTree& t, const EulerLca& lca,
                                    const std::set<std::string>& labels) {
    RestrictedTree r;
    std::vector<int> marked;
    for (int v : t.preorder())
        if (!t.nodes[v].label.empty() && labels.count(t.nodes[v].label))
            marked.push_back(v);  // preorder = tin order
    if (marked.empty()) return r;

    std::vector<int> cand = marked;
    for (std::size_t i = 1; i < marked.size(); ++i)
        cand.push_back(lca.lca(marked[i - 1], marked[i]));
    std::sort(cand.begin(), cand.end(),
              [&](int a, int b) { return lca.tin(a) < lca.tin(b); });
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    for (int v : cand) {
        r.to_restricted[v] = r.tree.size();
        r.to_original.push_back(v);
        r.tree.nodes.push_back({t.nodes[v].label, {}, -1});
    }
    r.tree.root = 0;  // smallest tin = ancestor of all kept nodes

    std::vector<int> stack;  // original ids
    for (int v : cand) {
        while (!stack.empty() && !lca.is_ancestor(stack.back(), v)) stack.pop_back();
        if (!stack.empty()) {
            int p = r.to_restricted[stack.back()];
            int c = r.to_restricted[v];
            r.tree.nodes[c].parent = p;
            r.tree.nodes[p].children.push_back(c);
        }
        stack.push_back(v);
    }
    return r;
}

inline RestrictedTree restrict_tree(const LabeledTree& t,
                                    const std::set<std::string>& labels) {
    return restrict_tree(t, EulerLca(t), labels);
}

// Restriction of t2 to the set of symbols used anywhere in t1.
inline RestrictedTree restrict_to_tree(const LabeledTree& t2, const EulerLca& lca2,
                                       const LabeledTree& t1) {
    std::set<std::string> labels;
    for (const auto& n : t1.nodes)
        if (!n.label.empty()) labels.insert(n.label);
    return restrict_tree(t2, lca2, labels);
}

// Centroid path decomposition: the heavy child of every internal node is
// the one with the largest subtree (ties: lowest child order index);
// paths are maximal chains of heavy edges, stored root-first, so every
// path ends at a leaf.
struct CentroidDecomposition {
    std::vector<std::vector<int>> paths;  // root-first node sequences
    std::vector<int> path_of;             // node -> path id
    std::vector<int> pos_in_path;         // node -> index in its path
    std::vector<int> heavy;               // node -> heavy child (-1 for leaves)
    std::vector<int> parent_path;         // path id -> attached path (-1 for root path)
    std::vector<int> level;               // path id -> attachment depth

    int root_of(int path) const { return paths[path][0]; }

    // children of u other than the heavy child
    std::vector<int> side_children(const LabeledTree& t, int u) const {
        std::vector<int> side;
        for (int c : t.nodes[u].children)
            if (c != heavy[u]) side.push_back(c);
        return side;
    }
};

inline CentroidDecomposition centroid_decompose(const LabeledTree& t) {
    CentroidDecomposition d;
    if (t.empty()) return d;
    auto sz = t.subtree_sizes();
    d.heavy.assign(t.size(), -1);
    for (int v = 0; v < t.size(); ++v) {
        int best = -1;
        for (int c : t.nodes[v].children)
            if (best < 0 || sz[c] > sz[best]) best = c;  // ties keep first
        d.heavy[v] = best;
    }
    d.path_of.assign(t.size(), -1);
    d.pos_in_path.assign(t.size(), -1);
    for (int v : t.preorder()) {
        bool starts_path = v == t.root || d.heavy[t.nodes[v].parent] != v;
        if (!starts_path) continue;
        int id = static_cast<int>(d.paths.size());
        d.paths.emplace_back();
        for (int w = v; w >= 0; w = d.heavy[w]) {
            d.path_of[w] = id;
            d.pos_in_path[w] = static_cast<int>(d.paths[id].size());
            d.paths[id].push_back(w);
        }
        int parent = t.nodes[v].parent;
        d.parent_path.push_back(parent < 0 ? -1 : d.path_of[parent]);
        d.level.push_back(parent < 0 ? 0 : d.level[d.path_of[parent]] + 1);
    }
    return d;
}

// Symbols labeling x and the nodes in the side trees of x.
inline std::set<std::string> label_set(const LabeledTree& t,
                                       const CentroidDecomposition& d, int x) {
    std::set<std::string> out;
    if (!t.nodes[x].label.empty()) out.insert(t.nodes[x].label);
    std::vector<int> stack = d.side_children(t, x);
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (!t.nodes[v].label.empty()) out.insert(t.nodes[v].label);
        for (int c : t.nodes[v].children) stack.push_back(c);
    }
    return out;
}

// Inverted index symbol -> nodes whose label set contains it. A symbol at
// node z belongs to L(z) and to L(a) for every ancestor a reached by
// stepping from a path root to its parent, so each labeled node
// contributes one entry per path level above it.
inline std::map<std::string, std::vector<int>> label_set_index(
    const LabeledTree& t, const CentroidDecomposition& d) {
    std::map<std::string, std::set<int>> raw;
    for (int z = 0; z < t.size(); ++z) {
        if (t.nodes[z].label.empty()) continue;
        const std::string& s = t.nodes[z].label;
        raw[s].insert(z);
        int p = d.path_of[z];
        while (d.parent_path[p] >= 0) {
            int attach = t.nodes[d.root_of(p)].parent;
            raw[s].insert(attach);
            p = d.path_of[attach];
        }
    }
    std::map<std::string, std::vector<int>> out;
    for (auto& [s, nodes] : raw) out[s] = std::vector<int>(nodes.begin(), nodes.end());
    return out;
}

// Intersecting node pairs between one centroid path of t1 and all paths
// of t2: pairs (u,v) with intersecting label sets, grouped by the path of
// v. Computed from the two symbol-indexed inverted lists.
inline std::map<int, std::vector<std::pair<int, int>>> inp(
    const LabeledTree& t1, const CentroidDecomposition& d1, int path_id,
    const LabeledTree& t2, const CentroidDecomposition& d2) {
    auto idx1 = label_set_index(t1, d1);
    auto idx2 = label_set_index(t2, d2);
    std::set<std::pair<int, int>> pairs;
    for (const auto& [s, us] : idx1) {
        auto it = idx2.find(s);
        if (it == idx2.end()) continue;
        for (int u : us) {
            if (d1.path_of[u] != path_id) continue;
            for (int v : it->second) pairs.insert({u, v});
        }
    }
    std::map<int, std::vector<std::pair<int, int>>> grouped;
    for (auto [u, v] : pairs) grouped[d2.path_of[v]].push_back({u, v});
    return grouped;
}

}  // namespace treematch
