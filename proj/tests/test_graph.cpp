#include <doctest.h>

#include <algorithm>
#include <set>

#include "sqp/graph.hpp"

using namespace sqp;

namespace {

// two vertices joined by three parallel edges, weights as given
PlaneWeightedGraph theta(int w0, int w1, int w2) {
    PlaneWeightedGraph g;
    g.nv = 2;
    g.edges = {{0, 1, w0, -1}, {0, 1, w1, -1}, {0, 1, w2, -1}};
    g.rot = {{0, 2, 4}, {5, 3, 1}};  // opposite cyclic orders: planar
    return g;
}

// path-shaped Seifert graph of the figure-eight: ++ pair then -- pair
PlaneWeightedGraph fig8_graph() {
    PlaneWeightedGraph g;
    g.nv = 3;
    g.edges = {{0, 1, 1, -1}, {0, 1, 1, -1}, {1, 2, -1, -1}, {1, 2, -1, -1}};
    g.rot = {{0, 2}, {1, 3, 4, 6}, {7, 5}};
    return g;
}

std::multiset<int> region_weights(const PlaneWeightedGraph& g) {
    auto r = graph_regions(g);
    return {r.weight.begin(), r.weight.end()};
}

std::multiset<int> region_lengths(const PlaneWeightedGraph& g) {
    auto r = graph_regions(g);
    std::multiset<int> out;
    for (int i = 0; i < r.count(); ++i) out.insert(r.length(i));
    return out;
}

}  // namespace

TEST_CASE("regions of small embedded graphs") {
    PlaneWeightedGraph t = theta(1, 1, -1);
    validate_graph(t);
    CHECK(region_lengths(t) == std::multiset<int>{2, 2, 2});
    CHECK(region_weights(t) == std::multiset<int>{0, 0, 2});

    PlaneWeightedGraph f = fig8_graph();
    validate_graph(f);
    CHECK(region_lengths(f) == std::multiset<int>{2, 2, 4});
    CHECK(region_weights(f) == std::multiset<int>{-2, 0, 2});
    CHECK(region_profile(graph_regions(f)) == std::vector<int>{2, 1});
}

TEST_CASE("a twisted rotation system fails the planarity check") {
    PlaneWeightedGraph t = theta(1, 1, 1);
    t.rot[1] = {1, 3, 5};  // same cyclic order on both sides: torus, not plane
    CHECK_THROWS_AS(validate_graph(t), structural_error);
}

TEST_CASE("bipartition") {
    CHECK(bipartition(fig8_graph()) == std::vector<int>{0, 1, 0});

    PlaneWeightedGraph tri;
    tri.nv = 3;
    tri.edges = {{0, 1, 1, -1}, {1, 2, 1, -1}, {2, 0, 1, -1}};
    tri.rot = {{0, 5}, {1, 2}, {3, 4}};
    validate_graph(tri);
    CHECK_THROWS_AS(bipartition(tri), reduction_invariant_error);
}

TEST_CASE("biconnected blocks and cut vertices") {
    Blocks b = biconnected_blocks(fig8_graph());
    CHECK(b.cut_vertices == std::vector<int>{1});
    REQUIRE(b.block_edges.size() == 2);
    std::set<std::vector<int>> blocks(b.block_edges.begin(), b.block_edges.end());
    CHECK(blocks.count({0, 1}) == 1);
    CHECK(blocks.count({2, 3}) == 1);

    Blocks tb = biconnected_blocks(theta(1, 1, 1));
    CHECK(tb.cut_vertices.empty());
    CHECK(tb.block_edges.size() == 1);

    // two bridges in a row: every edge its own block
    PlaneWeightedGraph path;
    path.nv = 3;
    path.edges = {{0, 1, 1, -1}, {1, 2, 1, -1}};
    path.rot = {{0}, {1, 2}, {3}};
    validate_graph(path);
    Blocks pb = biconnected_blocks(path);
    CHECK(pb.cut_vertices == std::vector<int>{1});
    CHECK(pb.block_edges.size() == 2);
}

TEST_CASE("edge_subgraph keeps rotations") {
    std::vector<int> vmap;
    PlaneWeightedGraph s = edge_subgraph(fig8_graph(), {2, 3}, &vmap);
    validate_graph(s);
    CHECK(s.nv == 2);
    CHECK(s.ne() == 2);
    CHECK(vmap == std::vector<int>{1, 2});
    CHECK(s.edges[0].w == -1);
    CHECK(region_lengths(s) == std::multiset<int>{2, 2});
}

TEST_CASE("contract_edge") {
    PlaneWeightedGraph sq;
    sq.nv = 4;
    sq.edges = {{0, 1, 1, -1}, {1, 2, 1, -1}, {2, 3, 1, -1}, {3, 0, 1, -1}};
    sq.rot = {{0, 7}, {1, 2}, {3, 4}, {5, 6}};
    validate_graph(sq);

    std::vector<int> vmap, emap;
    PlaneWeightedGraph tri = contract_edge(sq, 0, &vmap, &emap);
    validate_graph(tri);
    CHECK(tri.nv == 3);
    CHECK(tri.ne() == 3);
    CHECK(vmap == std::vector<int>{0, 0, 1, 2});
    CHECK(emap == std::vector<int>{-1, 0, 1, 2});
    CHECK(graph_regions(tri).count() == 2);

    // contracting one edge of a parallel pair is refused
    CHECK_THROWS_AS(contract_edge(theta(1, 1, 1), 0), internal_error);
}

TEST_CASE("merge_vertices splices the rotations") {
    PlaneWeightedGraph g;
    g.nv = 4;
    g.edges = {{0, 1, 1, -1}, {2, 3, -1, -1}};
    g.rot = {{0}, {1}, {2}, {3}};
    std::vector<int> vmap;
    PlaneWeightedGraph m = merge_vertices(g, 0, 0, 2, 0, &vmap);
    validate_graph(m);
    CHECK(m.nv == 3);
    CHECK(vmap == std::vector<int>{0, 1, 0, 2});
    CHECK(m.rot[0].size() == 2);
    CHECK(graph_regions(m).count() == 1);
    CHECK(graph_regions(m).walks[0].size() == 4);
}

TEST_CASE("insert_path subdivides a region") {
    PlaneWeightedGraph t = theta(1, 1, 1);
    // chord through the lens between edges 0 and 1
    PlaneWeightedGraph c = insert_path(t, 0, 0, 1, 1, 1);
    validate_graph(c);
    CHECK(c.ne() == 4);
    CHECK(region_lengths(c) == std::multiset<int>{2, 2, 2, 2});

    // two-edge path across the outer region of the figure-eight graph
    PlaneWeightedGraph f = fig8_graph();
    PlaneWeightedGraph h = insert_path(f, 0, 0, 2, 1, 2);
    validate_graph(h);
    CHECK(h.nv == 4);
    CHECK(h.ne() == 6);
    CHECK(region_lengths(h) == std::multiset<int>{2, 2, 4, 4});
}

TEST_CASE("profile comparison looks at the largest region first") {
    CHECK(profile_less({2, 1}, {2, 2}));
    CHECK(profile_less({5}, {1, 1}));
    CHECK(profile_less({9, 9}, {0, 0, 1}));
    CHECK(!profile_less({1, 1}, {1, 1}));
    CHECK(!profile_less({1, 1}, {5}));
    CHECK(!profile_less({2}, {1}));
}

TEST_CASE("graph serialization round-trips") {
    PlaneWeightedGraph f = fig8_graph();
    std::string s = serialize_graph(f);
    PlaneWeightedGraph f2 = parse_graph(s);
    CHECK(serialize_graph(f2) == s);
    CHECK(graph_hash(f2) == graph_hash(f));
    CHECK(graph_hash(f) != graph_hash(theta(1, 1, 1)));
    CHECK_THROWS_AS(parse_graph("e 0 1 +1 -1\n"), parse_error);
    CHECK_THROWS_AS(parse_graph("v 2\ne 0 1 +2 -1\nrot 0 0:0\nrot 1 0:1\n"),
                    parse_error);
}

TEST_CASE("rot_positions inverts the rotation table") {
    PlaneWeightedGraph f = fig8_graph();
    auto pos = rot_positions(f);
    for (int v = 0; v < f.nv; ++v)
        for (size_t i = 0; i < f.rot[v].size(); ++i) {
            CHECK(pos[f.rot[v][i]].first == v);
            CHECK(pos[f.rot[v][i]].second == static_cast<int>(i));
        }
}
