#include <gtest/gtest.h>

#include <random>
#include <set>

#include "treematch/generators.hpp"
#include "treematch/hier.hpp"

namespace treematch {
namespace {

// root w=10 with children w=6 and w=4; g(root) has edges
// (c1,y0,5),(c2,y0,2),(c2,y1,2); optimum is {(c1,y0),(c2,y1)} = 7
HierInstance two_child_instance() {
    HierInstance inst;
    inst.nodes.resize(3);
    inst.nodes[0].id = 0;
    inst.nodes[0].weight = 10;
    inst.nodes[0].children = {1, 2};
    inst.nodes[1].id = 1;
    inst.nodes[1].weight = 6;
    inst.nodes[2].id = 2;
    inst.nodes[2].weight = 4;
    auto& g = inst.nodes[0].graph;
    g.x_count = 2;
    g.y_count = 2;
    g.add_edge(0, 0, 5);
    g.add_edge(1, 0, 2);
    g.add_edge(1, 1, 2);
    return inst;
}

HierInstance leaf_only() {
    HierInstance inst;
    inst.nodes.resize(1);
    inst.nodes[0].id = 7;
    inst.nodes[0].weight = 3;
    return inst;
}

TEST(ValidateInstance, LeafOnlyTreeIsOk) {
    EXPECT_TRUE(validate_instance(leaf_only()).ok);
}

TEST(ValidateInstance, TwoChildExampleIsOk) {
    EXPECT_TRUE(validate_instance(two_child_instance()).ok);
}

TEST(ValidateInstance, ChildEdgeSumOverflowIsViolation) {
    HierInstance inst = two_child_instance();
    inst.nodes[0].graph.edges[1].w = 5;  // child 2 now carries 5+2 > 4
    auto v = validate_instance(inst);
    EXPECT_FALSE(v.ok);
    EXPECT_EQ(v.message, "child edge weight sum exceeds child weight");
}

TEST(ValidateInstance, WeightBelowChildSumIsViolation) {
    HierInstance inst = two_child_instance();
    inst.nodes[0].weight = 9;
    EXPECT_FALSE(validate_instance(inst).ok);
}

TEST(Secw, Examples) {
    HierInstance inst;
    inst.nodes.resize(4);
    for (int i = 0; i < 4; ++i) inst.nodes[i].id = i;
    inst.nodes[0].children = {1, 2, 3};
    inst.nodes[1].weight = 5;
    inst.nodes[2].weight = 3;
    inst.nodes[3].weight = 2;
    EXPECT_EQ(secw(inst, 0), 3);

    inst.nodes[0].children = {1};
    EXPECT_EQ(secw(inst, 0), 0);

    inst.nodes[0].children = {1, 2};
    inst.nodes[1].weight = 4;
    inst.nodes[2].weight = 4;
    EXPECT_EQ(secw(inst, 0), 4);
}

TEST(CriticalDegree, Examples) {
    // B = {0, 4} with weights 3 and 5, so delta = 3; node 0 has children
    // with weights {4,2}: one child >= 3
    HierInstance inst;
    inst.nodes.resize(5);
    for (int i = 0; i < 5; ++i) inst.nodes[i].id = i;
    inst.nodes[0].weight = 3;
    inst.nodes[0].children = {1, 2};
    inst.nodes[1].weight = 4;
    inst.nodes[2].weight = 2;
    inst.nodes[4].weight = 5;
    inst.nodes[4].children = {3};
    inst.nodes[3].weight = 1;
    EXPECT_TRUE(critical_degree_holds(inst, {0, 4}, 1));

    // h = max child count is always enough
    EXPECT_TRUE(critical_degree_holds(inst, {0, 4}, 2));

    // three children all at least delta with h = 2 fails
    HierInstance big;
    big.nodes.resize(4);
    big.nodes[0].weight = 2;
    big.nodes[0].children = {1, 2, 3};
    for (int i = 1; i < 4; ++i) big.nodes[i].weight = 5;
    EXPECT_FALSE(critical_degree_holds(big, {0}, 2));

    EXPECT_THROW(critical_degree_holds(big, {}, 1), std::invalid_argument);
}

TEST(SolveCriticalSet, EmptyHubSetIsPlainMwm) {
    HierInstance inst = two_child_instance();
    // delta = w(root) = 10 exceeds every child weight, so H(root) is empty
    auto res = solve_critical_set(inst, {0}, 1);
    ASSERT_TRUE(res.count(0));
    EXPECT_EQ(res[0].weight, 7);
    EXPECT_EQ(res[0].weight, mwm_exact(inst.nodes[0].graph).weight);
}

TEST(SolveCriticalSet, PreconditionViolationThrows) {
    HierInstance big;
    big.nodes.resize(4);
    big.nodes[0].weight = 2;
    big.nodes[0].children = {1, 2, 3};
    auto& g = big.nodes[0].graph;
    g.x_count = 3;
    g.y_count = 1;
    for (int i = 0; i < 3; ++i) g.add_edge(i, 0, 1);
    for (int i = 1; i < 4; ++i) big.nodes[i].weight = 5;
    EXPECT_THROW(solve_critical_set(big, {0}, 2), std::invalid_argument);
}

TEST(SolveCriticalSet, RandomThreeLevelInstancesMatchOracle) {
    std::mt19937_64 rng(606);
    for (int it = 0; it < 60; ++it) {
        HierInstance inst = random_hier_instance(rng, 25, 4);
        ASSERT_TRUE(validate_instance(inst).ok) << "generator broke invariants";
        std::vector<int> internals;
        for (int u = 0; u < inst.size(); ++u)
            if (inst.internal(u)) internals.push_back(u);
        if (internals.empty()) continue;
        std::int64_t max_children = 0;
        for (int u : internals)
            max_children = std::max<std::int64_t>(max_children,
                                                  inst.nodes[u].children.size());
        auto res = solve_critical_set(inst, internals, max_children);
        for (int u : internals)
            EXPECT_EQ(res[u].weight, mwm_exact(inst.nodes[u].graph).weight);
    }
}

TEST(ClassifyNodes, SmallBGoesResidual) {
    HierInstance inst = two_child_instance();  // b = 2
    auto cls = classify_nodes(inst);
    EXPECT_EQ(cls.residual, std::vector<int>{0});
    EXPECT_TRUE(cls.phi.empty());
}

// Instance with b = 3: root has three children backed by a 3x3 graph.
HierInstance b3_instance(std::int64_t w1, std::int64_t w2, std::int64_t w3,
                         std::int64_t root_extra = 0) {
    HierInstance inst;
    inst.nodes.resize(4);
    std::int64_t ws[3] = {w1, w2, w3};
    inst.nodes[0].id = 0;
    inst.nodes[0].children = {1, 2, 3};
    inst.nodes[0].weight = w1 + w2 + w3 + root_extra;
    auto& g = inst.nodes[0].graph;
    g.x_count = 3;
    g.y_count = 3;
    for (int i = 0; i < 3; ++i) {
        inst.nodes[i + 1].id = i + 1;
        inst.nodes[i + 1].weight = ws[i];
        std::int64_t first = std::min<std::int64_t>(ws[i], 3);
        g.add_edge(i, i, first);
        std::int64_t rest = ws[i] - first;
        if (rest > 0) g.add_edge(i, (i + 1) % 3, std::min<std::int64_t>(rest, 2));
    }
    return inst;
}

TEST(ClassifyNodes, SecwJustAboveCubeIsPhiOne) {
    // b = 3, b^3 = 27; secw = 28 lands in (2^0*27, 2^1*27]
    HierInstance inst = b3_instance(28, 28, 1);
    ASSERT_TRUE(validate_instance(inst).ok);
    ASSERT_EQ(inst.b(), 3);
    auto cls = classify_nodes(inst);
    ASSERT_TRUE(cls.phi.count(1));
    EXPECT_EQ(cls.phi[1], std::vector<int>{0});
}

TEST(ClassifyNodes, HeavyNodeWithSmallSecwIsPiPrime) {
    // b = 3; w(root) = 28 > 27 while secw = 5 <= 27
    HierInstance inst = b3_instance(20, 5, 2, 1);
    ASSERT_TRUE(validate_instance(inst).ok);
    ASSERT_EQ(inst.b(), 3);
    auto cls = classify_nodes(inst);
    EXPECT_EQ(cls.pi_prime, std::vector<int>{0});
}

TEST(ClassifyNodes, PartitionIsDisjointAndCovering) {
    std::mt19937_64 rng(7474);
    for (int it = 0; it < 80; ++it) {
        HierInstance inst = random_hier_instance(rng, 40, 6);
        auto cls = classify_nodes(inst);
        std::set<int> seen;
        std::size_t total = 0;
        auto absorb = [&](const std::vector<int>& nodes) {
            for (int u : nodes) {
                EXPECT_TRUE(seen.insert(u).second) << "node in two classes";
                EXPECT_TRUE(inst.internal(u));
            }
            total += nodes.size();
        };
        for (const auto& [k, nodes] : cls.phi) absorb(nodes);
        absorb(cls.pi_prime);
        for (const auto& band : cls.pi) absorb(band);
        absorb(cls.residual);
        std::size_t internal_count = 0;
        for (int u = 0; u < inst.size(); ++u)
            if (inst.internal(u)) ++internal_count;
        EXPECT_EQ(total, internal_count);
    }
}

TEST(SolveHierarchical, SingleInternalNodeEqualsPlainMwm) {
    HierInstance inst = two_child_instance();
    auto res = solve_hierarchical(inst);
    ASSERT_EQ(res.size(), 1u);
    EXPECT_EQ(res[0].weight, mwm_exact(inst.nodes[0].graph).weight);
}

TEST(SolveHierarchical, HandBuiltThreeInternalNodes) {
    // three internal nodes stacked: grandparent -> parent -> leaves
    HierInstance inst;
    inst.nodes.resize(6);
    for (int i = 0; i < 6; ++i) inst.nodes[i].id = i;
    // leaves 3,4,5
    inst.nodes[3].weight = 2;
    inst.nodes[4].weight = 3;
    inst.nodes[5].weight = 4;
    // node 2: children 4,5
    inst.nodes[2].children = {4, 5};
    inst.nodes[2].weight = 8;
    inst.nodes[2].graph.x_count = 2;
    inst.nodes[2].graph.y_count = 2;
    inst.nodes[2].graph.add_edge(0, 0, 3);
    inst.nodes[2].graph.add_edge(1, 0, 2);
    inst.nodes[2].graph.add_edge(1, 1, 2);
    // node 1: child 3
    inst.nodes[1].children = {3};
    inst.nodes[1].weight = 2;
    inst.nodes[1].graph.x_count = 1;
    inst.nodes[1].graph.y_count = 1;
    inst.nodes[1].graph.add_edge(0, 0, 2);
    // root: children 1,2
    inst.nodes[0].children = {1, 2};
    inst.nodes[0].weight = 12;
    inst.nodes[0].graph.x_count = 2;
    inst.nodes[0].graph.y_count = 1;
    inst.nodes[0].graph.add_edge(0, 0, 2);
    inst.nodes[0].graph.add_edge(1, 0, 5);
    ASSERT_TRUE(validate_instance(inst).ok);

    auto res = solve_hierarchical(inst);
    ASSERT_EQ(res.size(), 3u);
    for (int u : {0, 1, 2})
        EXPECT_EQ(res[u].weight, mwm_exact(inst.nodes[u].graph).weight);
}

TEST(SolveHierarchical, RandomInstancesMatchPerNodeOracle) {
    std::mt19937_64 rng(112233);
    for (int it = 0; it < 80; ++it) {
        HierInstance inst = random_hier_instance(rng, 50, 5, 9, 8);
        auto res = solve_hierarchical(inst);
        for (int u = 0; u < inst.size(); ++u) {
            if (!inst.internal(u)) continue;
            ASSERT_TRUE(res.count(u));
            EXPECT_EQ(res[u].weight, mwm_exact(inst.nodes[u].graph).weight)
                << "instance " << it << " node " << u;
        }
    }
}

TEST(SolveHierarchical, CountingBoundOnSecw) {
    // |{u : secw(u) > x}| < w(r)/x for doubling x up to w(r)
    std::mt19937_64 rng(404);
    for (int it = 0; it < 60; ++it) {
        HierInstance inst = random_hier_instance(rng, 40, 5);
        std::int64_t wr = inst.nodes[inst.root].weight;
        for (std::int64_t x = 1; x <= wr; x *= 2) {
            std::int64_t count = 0;
            for (int u = 0; u < inst.size(); ++u)
                if (inst.internal(u) && secw(inst, u) > x) ++count;
            EXPECT_LT(count, (wr + x - 1) / x == wr / x ? wr / x + 1 : wr / x);
            EXPECT_LT(static_cast<double>(count), static_cast<double>(wr) / x);
        }
    }
}

TEST(HierJson, RoundTrip) {
    HierInstance inst = two_child_instance();
    std::string text = write_hier_instance(inst);
    HierInstance back = parse_hier_instance(text);
    EXPECT_TRUE(validate_instance(back).ok);
    EXPECT_EQ(back.size(), inst.size());
    auto res = solve_hierarchical(back);
    EXPECT_EQ(res[0].weight, 7);
}

TEST(HierJson, MalformedDocumentsThrow) {
    EXPECT_THROW(parse_hier_instance("{}"), std::runtime_error);
    EXPECT_THROW(parse_hier_instance("{\"nodes\":[]}"), std::runtime_error);
    EXPECT_THROW(
        parse_hier_instance(
            "{\"nodes\":[{\"id\":0,\"weight\":1,\"children\":[99]}]}"),
        std::runtime_error);
}

}  // namespace
}  // namespace treematch
