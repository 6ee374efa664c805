#include <doctest.h>

#include <vector>

#include "brickplan/community.hpp"
#include "brickplan/errors.hpp"

using namespace brickplan;

namespace {

BrickGraph path5() {
    BrickGraph g;
    g.nodes = {1, 2, 3, 4, 5};
    g.edges = {{1, 2}, {2, 3}, {3, 4}, {4, 5}};
    return g;
}

// Two triangles joined by a single bridge edge 3-4.
BrickGraph two_triangles() {
    BrickGraph g;
    g.nodes = {1, 2, 3, 4, 5, 6};
    g.edges = {{1, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 5}, {4, 6}, {5, 6}};
    return g;
}

// The two triangles as a support graph with grounds 7 -> 1 and 8 -> 4.
ConnectivityGraph grounded_triangles() {
    ConnectivityGraph g;
    g.model = "triangles";
    g.brick_count = 6;
    g.nodes = {{1, NodeKind::brick}, {2, NodeKind::brick}, {3, NodeKind::brick},
               {4, NodeKind::brick}, {5, NodeKind::brick}, {6, NodeKind::brick},
               {7, NodeKind::ground}, {8, NodeKind::ground}};
    g.edges = {{1, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 5}, {4, 6}, {5, 6}, {7, 1}, {8, 4}};
    return g;
}

}  // namespace

TEST_CASE("edge betweenness on a path counts crossing pairs") {
    const auto bt = edge_betweenness(path5());
    CHECK(bt.at({1, 2}) == doctest::Approx(4.0));
    CHECK(bt.at({2, 3}) == doctest::Approx(6.0));
    CHECK(bt.at({3, 4}) == doctest::Approx(6.0));
    CHECK(bt.at({4, 5}) == doctest::Approx(4.0));
}

TEST_CASE("edge betweenness on a star") {
    BrickGraph g;
    g.nodes = {1, 2, 3, 4};
    g.edges = {{1, 2}, {1, 3}, {1, 4}};
    const auto bt = edge_betweenness(g);
    CHECK(bt.at({1, 2}) == doctest::Approx(3.0));
    CHECK(bt.at({1, 3}) == doctest::Approx(3.0));
    CHECK(bt.at({1, 4}) == doctest::Approx(3.0));
}

TEST_CASE("the bridge between two triangles dominates betweenness") {
    const auto bt = edge_betweenness(two_triangles());
    CHECK(bt.at({3, 4}) == doctest::Approx(9.0));
    CHECK(bt.at({1, 3}) == doctest::Approx(4.0));
    CHECK(bt.at({1, 2}) == doctest::Approx(1.0));
}

TEST_CASE("modularity of the natural split of two triangles") {
    const double q = modularity(two_triangles(), {{1, 2, 3}, {4, 5, 6}});
    CHECK(q == doctest::Approx(5.0 / 14.0));
    CHECK(modularity(two_triangles(), {{1, 2, 3, 4, 5, 6}}) == doctest::Approx(0.0));
}

TEST_CASE("girvan-newman removes the bridge first") {
    const auto steps = girvan_newman_dendrogram(two_triangles());
    REQUIRE(!steps.empty());
    CHECK(steps[0].removed == Edge{3, 4});
    CHECK(steps[0].betweenness == doctest::Approx(9.0));
    CHECK(steps[0].components_after == 2);
    CHECK(steps[0].partition_after ==
          std::vector<std::vector<int>>{{1, 2, 3}, {4, 5, 6}});
    CHECK(steps[0].modularity_after == doctest::Approx(5.0 / 14.0));
    CHECK(steps.size() == two_triangles().edges.size());
}

TEST_CASE("betweenness ties break on the smallest edge") {
    // Middle edges of a 5-path tie at 6; (2,3) sorts first.
    const auto steps = girvan_newman_dendrogram(path5());
    CHECK(steps[0].removed == Edge{2, 3});
}

TEST_CASE("detection attaches grounds to their brick's community") {
    CommunityConfig cfg;
    const Partition p = detect_communities(grounded_triangles(), cfg);
    REQUIRE(p.communities.size() == 2);
    CHECK(p.communities[0] == std::vector<int>{1, 2, 3, 7});
    CHECK(p.communities[1] == std::vector<int>{4, 5, 6, 8});
    CHECK(p.method == "girvan-newman");
}

TEST_CASE("a community target forces the dendrogram deeper") {
    CommunityConfig cfg;
    cfg.target_communities = 3;
    const Partition p = detect_communities(grounded_triangles(), cfg);
    CHECK(p.communities.size() == 3);

    cfg.target_communities = 1;
    CHECK_THROWS_AS(detect_communities(grounded_triangles(), cfg), ConfigError);
    cfg.target_communities = 7;
    CHECK_THROWS_AS(detect_communities(grounded_triangles(), cfg), ConfigError);
}

TEST_CASE("leiden separates the triangles and is seed-stable") {
    const auto a = leiden_communities(two_triangles(), 7);
    const auto b = leiden_communities(two_triangles(), 7);
    CHECK(a == b);
    REQUIRE(a.size() == 2);
    CHECK(a[0] == std::vector<int>{1, 2, 3});
    CHECK(a[1] == std::vector<int>{4, 5, 6});

    CommunityConfig cfg;
    cfg.method = CommunityMethod::leiden;
    cfg.seed = 7;
    const Partition p = detect_communities(grounded_triangles(), cfg);
    CHECK(p.method == "leiden");
    CHECK(p.seed == 7);
    CHECK(p.communities == std::vector<std::vector<int>>{{1, 2, 3, 7}, {4, 5, 6, 8}});
}

TEST_CASE("leiden on an edgeless graph yields singletons") {
    BrickGraph g;
    g.nodes = {1, 2, 3};
    const auto communities = leiden_communities(g, 0);
    CHECK(communities == std::vector<std::vector<int>>{{1}, {2}, {3}});
}

TEST_CASE("brick graphs drop grounds and directions") {
    const BrickGraph bg = BrickGraph::from_connectivity(grounded_triangles());
    CHECK(bg.nodes == std::vector<int>{1, 2, 3, 4, 5, 6});
    CHECK(bg.edges == two_triangles().edges);
    CHECK(bg.components().size() == 1);
}
