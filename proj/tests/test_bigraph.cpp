#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "treematch/bigraph.hpp"
#include "treematch/generators.hpp"
#include "treematch/matcher.hpp"

namespace treematch {
namespace {

BipartiteGraph two_by_two() {
    BipartiteGraph g;
    g.x_count = 2;
    g.y_count = 2;
    g.add_edge(0, 0, 3);
    g.add_edge(0, 1, 4);
    g.add_edge(1, 0, 5);
    g.add_edge(1, 1, 2);
    return g;
}

TEST(Validate, MinimalLegalGraph) {
    BipartiteGraph g;
    g.x_count = 1;
    g.y_count = 1;
    g.add_edge(0, 0, 5);
    EXPECT_TRUE(validate(g).ok);
}

TEST(Validate, NonpositiveWeight) {
    BipartiteGraph g;
    g.x_count = 1;
    g.y_count = 1;
    g.add_edge(0, 0, 0);
    auto v = validate(g);
    EXPECT_FALSE(v.ok);
    EXPECT_EQ(v.message, "nonpositive weight");
}

TEST(Validate, IsolatedNode) {
    BipartiteGraph g;
    g.x_count = 2;
    g.y_count = 1;
    g.add_edge(0, 0, 1);
    auto v = validate(g);
    EXPECT_FALSE(v.ok);
    EXPECT_EQ(v.message, "isolated node");
}

TEST(Validate, DuplicateEdge) {
    BipartiteGraph g;
    g.x_count = 1;
    g.y_count = 1;
    g.add_edge(0, 0, 1);
    g.add_edge(0, 0, 2);
    EXPECT_FALSE(validate(g).ok);
}

TEST(MwmExact, SingleEdge) {
    BipartiteGraph g;
    g.x_count = 1;
    g.y_count = 1;
    g.add_edge(0, 0, 5);
    Matching m = mwm_exact(g);
    EXPECT_EQ(m.weight, 5);
    ASSERT_EQ(m.pairs.size(), 1u);
}

TEST(MwmExact, TwoByTwoPicksCrossing) {
    // all five matchings enumerated by hand; optimum is {(0,1),(1,0)} = 9
    Matching m = mwm_exact(two_by_two());
    EXPECT_EQ(m.weight, 9);
    ASSERT_EQ(m.pairs.size(), 2u);
    EXPECT_EQ(m.pairs[0], (std::pair<int, int>{0, 1}));
    EXPECT_EQ(m.pairs[1], (std::pair<int, int>{1, 0}));
}

TEST(MwmExact, EmptyEdgeList) {
    BipartiteGraph g;
    g.x_count = 3;
    g.y_count = 2;
    Matching m = mwm_exact(g);
    EXPECT_EQ(m.weight, 0);
    EXPECT_TRUE(m.pairs.empty());
}

TEST(MwmBruteforce, MatchesHandExamples) {
    EXPECT_EQ(mwm_bruteforce(two_by_two()).weight, 9);

    BipartiteGraph single;
    single.x_count = 1;
    single.y_count = 1;
    single.add_edge(0, 0, 7);
    Matching m = mwm_bruteforce(single);
    EXPECT_EQ(m.weight, 7);
    ASSERT_EQ(m.pairs.size(), 1u);

    BipartiteGraph complete;
    complete.x_count = 3;
    complete.y_count = 3;
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) complete.add_edge(x, y, 1);
    EXPECT_EQ(mwm_bruteforce(complete).weight, 3);
}

TEST(MwmBruteforce, RejectsLargeInstances) {
    BipartiteGraph g;
    g.x_count = 9;
    g.y_count = 9;
    for (int i = 0; i < 9; ++i) g.add_edge(i, i, 1);
    EXPECT_THROW(mwm_bruteforce(g), std::invalid_argument);
}

TEST(MwmExact, AgreesWithBruteforceOnRandomGraphs) {
    std::mt19937_64 rng(20260810);
    for (int it = 0; it < 400; ++it) {
        BipartiteGraph g = random_bigraph(rng, 6, 12, 20);
        Matching exact = mwm_exact(g);
        Matching brute = mwm_bruteforce(g);
        ASSERT_EQ(exact.weight, brute.weight) << "iteration " << it;
        ASSERT_TRUE(matching_consistent(g, exact)) << "iteration " << it;
    }
}

TEST(MwmExact, ScalingWeightsScalesOptimum) {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 100; ++it) {
        BipartiteGraph g = random_bigraph(rng, 5, 8, 15);
        std::int64_t c = rand_range(rng, 2, 9);
        BipartiteGraph scaled = g;
        for (auto& e : scaled.edges) e.w *= c;
        EXPECT_EQ(mwm_exact(scaled).weight, c * mwm_exact(g).weight);
    }
}

TEST(GraphText, RoundTripAndComments) {
    std::string text = "# comment\nbipartite 2 2\n0 0 3\n0 1 4\n1 0 5\n1 1 2\n";
    BipartiteGraph g = parse_graph(text);
    EXPECT_EQ(g.x_count, 2);
    EXPECT_EQ(g.edges.size(), 4u);
    std::ostringstream out;
    write_graph(out, g);
    BipartiteGraph again = parse_graph(out.str());
    EXPECT_EQ(again.edges.size(), g.edges.size());
    EXPECT_EQ(mwm_exact(again).weight, 9);
}

TEST(GraphText, MalformedInputThrows) {
    EXPECT_THROW(parse_graph(std::string("nonsense 1 2\n")), std::runtime_error);
    EXPECT_THROW(parse_graph(std::string("bipartite 2\n")), std::runtime_error);
    EXPECT_THROW(parse_graph(std::string("bipartite 1 1\n0 zero\n")),
                 std::runtime_error);
}

}  // namespace
}  // namespace treematch
