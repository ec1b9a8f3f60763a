#include <doctest.h>

#include <map>
#include <set>

#include "sqp/criterion.hpp"

using namespace sqp;

namespace {

const char* kTrefoil = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
const char* kFig8 = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)";
// trefoil with the first crossing switched: the negative edge gains
// positive parallels
const char* kSwitched = "X(4,2,5,1) X(3,6,4,1) X(5,2,6,3)";
// trefoil with a negative curl added on the arc into the second crossing
const char* kCurled = "X(1,4,2,5) X(3,7,4,1) X(5,2,6,3) X(6,7,8,8)";

PlaneWeightedGraph diagram_graph(const std::string& pd) {
    return seifert_graph(move_infinity(seifert_circles(parse_pd(pd)))).g;
}

// independent check: scan all edge subsets for single vertex-simple cycles
struct OracleResult {
    std::optional<int> min;
    long long count = 0;
};

OracleResult cycle_oracle(const PlaneWeightedGraph& g) {
    OracleResult o;
    const int ne = g.ne();
    REQUIRE(ne <= 20);
    for (unsigned mask = 1; mask < (1u << ne); ++mask) {
        std::map<int, int> deg;
        UnionFind uf(g.nv);
        int w = 0, anchor = -1;
        for (int e = 0; e < ne; ++e)
            if (mask >> e & 1) {
                deg[g.edges[e].u] += 1;
                deg[g.edges[e].v] += 1;
                uf.unite(g.edges[e].u, g.edges[e].v);
                w += g.edges[e].w;
                anchor = g.edges[e].u;
            }
        bool ok = true;
        for (auto [v, dv] : deg)
            if (dv != 2) ok = false;
        for (auto [v, dv] : deg)
            if (ok && !uf.same(v, anchor)) ok = false;
        if (!ok) continue;
        ++o.count;
        if (!o.min || w < *o.min) o.min = w;
    }
    return o;
}

void check_witness(const PlaneWeightedGraph& g, const CycleReport& rep) {
    REQUIRE(rep.min_weight.has_value());
    std::set<int> distinct(rep.witness.begin(), rep.witness.end());
    CHECK(distinct.size() == rep.witness.size());
    std::map<int, int> deg;
    int w = 0;
    for (int e : rep.witness) {
        deg[g.edges[e].u] += 1;
        deg[g.edges[e].v] += 1;
        w += g.edges[e].w;
    }
    for (auto [v, dv] : deg) CHECK(dv == 2);
    CHECK(w == *rep.min_weight);
}

PlaneWeightedGraph theta331() {
    PlaneWeightedGraph g;
    g.nv = 6;
    g.edges = {{0, 2, 1, -1}, {2, 3, 1, -1}, {3, 1, 1, -1},
               {0, 4, 1, -1}, {4, 5, 1, -1}, {5, 1, 1, -1},
               {0, 1, -1, -1}};
    return g;
}

}  // namespace

TEST_CASE("cycle minimum on the standard fixtures") {
    auto tref = diagram_graph(kTrefoil);
    auto r = min_cycle_weight(tref);
    CHECK(r.min_weight == 2);
    CHECK(r.cycles_examined == 3);
    check_witness(tref, r);

    auto f8 = diagram_graph(kFig8);
    auto rf = min_cycle_weight(f8);
    CHECK(rf.min_weight == -2);
    CHECK(rf.cycles_examined == 2);
    check_witness(f8, rf);

    auto th = theta331();
    auto rt = min_cycle_weight(th);
    CHECK(rt.min_weight == 2);
    CHECK(rt.cycles_examined == 3);
    check_witness(th, rt);

    PlaneWeightedGraph tree;
    tree.nv = 3;
    tree.edges = {{0, 1, 1, -1}, {1, 2, -1, -1}};
    CHECK_FALSE(min_cycle_weight(tree).min_weight.has_value());
    CHECK(is_canonical_qp(tree));

    PlaneWeightedGraph empty;
    CHECK_FALSE(min_cycle_weight(empty).min_weight.has_value());
}

TEST_CASE("self-loops count as cycles of their own weight") {
    PlaneWeightedGraph g;
    g.nv = 2;
    g.edges = {{0, 0, -1, -1}, {0, 1, 1, -1}, {0, 1, 1, -1}};
    auto r = min_cycle_weight(g);
    CHECK(r.min_weight == -1);
    CHECK(r.cycles_examined == 2);
    CHECK(r.witness == std::vector<int>{0});
    CHECK_FALSE(is_canonical_qp(g));
}

TEST_CASE("exhaustive scan matches the subset oracle on random graphs") {
    Rng rng(20260823);
    for (int it = 0; it < 200; ++it) {
        PlaneWeightedGraph g;
        g.nv = 2 + rng.below(5);
        int ne = rng.below(11);
        for (int e = 0; e < ne; ++e) {
            int u = rng.below(g.nv);
            int v = rng.below(g.nv);
            if (u == v && rng.below(8) != 0) {
                v = (u + 1 + rng.below(g.nv - 1)) % g.nv;
            }
            g.edges.push_back({u, v, rng.coin() ? 1 : -1, -1});
        }
        auto oracle = cycle_oracle(g);
        auto full = min_cycle_weight(g);
        CHECK(full.min_weight == oracle.min);
        CHECK(full.cycles_examined == oracle.count);
        if (full.min_weight) check_witness(g, full);
        bool pass = !oracle.min || *oracle.min >= 2;
        CHECK(is_canonical_qp(g) == pass);
    }
}

TEST_CASE("decision mode stops on a failing cycle and reports it") {
    auto f8 = diagram_graph(kFig8);
    auto r = min_cycle_weight(f8, true);
    REQUIRE(r.min_weight.has_value());
    CHECK(*r.min_weight < 2);
    int w = 0;
    for (int e : r.witness) w += f8.edges[e].w;
    CHECK(w == *r.min_weight);
}

TEST_CASE("minimum is stable under edge relabeling and double mirror") {
    auto f8 = diagram_graph(kFig8);
    PlaneWeightedGraph shuffled = f8;
    std::swap(shuffled.edges[0], shuffled.edges[3]);
    std::swap(shuffled.edges[1], shuffled.edges[2]);
    auto a = min_cycle_weight(f8);
    auto b = min_cycle_weight(shuffled);
    CHECK(a.min_weight == b.min_weight);
    CHECK(a.cycles_examined == b.cycles_examined);

    auto twice = mirror(mirror(parse_pd(kFig8)));
    auto c = min_cycle_weight(seifert_graph(move_infinity(seifert_circles(twice))));
    CHECK(c.min_weight == a.min_weight);
}

TEST_CASE("flipping every weight turns a passing cyclic graph into a failing one") {
    auto tref = diagram_graph(kTrefoil);
    CHECK(is_canonical_qp(tref));
    PlaneWeightedGraph neg = tref;
    for (auto& e : neg.edges) e.w = -e.w;
    CHECK_FALSE(is_canonical_qp(neg));
    CHECK(min_cycle_weight(neg).min_weight == -2);
}

TEST_CASE("extra parallel positive edges keep a passing graph passing") {
    auto tref = diagram_graph(kTrefoil);
    tref.edges.push_back({0, 1, 1, -1});
    auto r = min_cycle_weight(tref);
    CHECK(r.min_weight == 2);
    CHECK(r.cycles_examined == 6);
    CHECK(is_canonical_qp(tref));
}

TEST_CASE("subgraphs of a passing graph pass") {
    auto g = diagram_graph(kCurled);
    REQUIRE(is_canonical_qp(g));
    Rng rng(7);
    for (int it = 0; it < 30; ++it) {
        std::vector<int> keep;
        for (int e = 0; e < g.ne(); ++e)
            if (rng.coin()) keep.push_back(e);
        CHECK(is_canonical_qp(edge_subgraph(g, keep, nullptr)));
    }
}

TEST_CASE("work cap aborts instead of silently truncating") {
    PlaneWeightedGraph k33;
    k33.nv = 6;
    for (int i = 0; i < 3; ++i)
        for (int j = 3; j < 6; ++j) k33.edges.push_back({i, j, 1, -1});
    CHECK(min_cycle_weight(k33).min_weight == 4);
    CHECK_THROWS_AS(min_cycle_weight(k33, false, 20), resource_error);
}

TEST_CASE("diagram classification") {
    auto pos = classify(parse_pd(kTrefoil));
    CHECK(pos.kind == DiagramKind::Positive);
    CHECK(pos.negative_count == 0);

    auto sw = classify(parse_pd(kSwitched));
    CHECK(sw.kind == DiagramKind::AlmostPositiveTypeII);
    CHECK(sw.negative_count == 1);
    CHECK(sw.negative_crossing == 0);
    CHECK(sw.parallel_positive >= 1);

    auto cu = classify(parse_pd(kCurled));
    CHECK(cu.kind == DiagramKind::AlmostPositiveTypeI);
    CHECK(cu.negative_crossing == 3);
    CHECK(cu.parallel_positive == -1);

    auto f8 = classify(parse_pd(kFig8));
    CHECK(f8.kind == DiagramKind::Other);
    CHECK(f8.negative_count == 2);

    auto curl = classify(parse_pd("X(1,1,2,2)"));
    CHECK(curl.kind == DiagramKind::AlmostPositiveTypeI);

    CHECK(std::string(kind_name(sw.kind)) == "almost-positive-type-II");
}

TEST_CASE("almost-positive diagrams: criterion agrees with the type split") {
    for (const char* pd : {kSwitched, kCurled, "X(1,1,2,2)", "X(1,2,2,1)"}) {
        auto cls = classify(parse_pd(pd));
        if (cls.negative_count != 1) continue;
        bool qp = is_canonical_qp(diagram_graph(pd));
        CHECK(qp == (cls.kind == DiagramKind::AlmostPositiveTypeI));
    }
}

TEST_CASE("verdicts") {
    auto tref = sqp_verdict(parse_pd(kTrefoil));
    CHECK(tref.sqp_yes);
    CHECK(tref.canonical_qp);
    REQUIRE(!tref.reasons.empty());
    CHECK(tref.reasons[0] == "positive-diagram");

    auto f8 = sqp_verdict(parse_pd(kFig8));
    CHECK_FALSE(f8.sqp_yes);
    CHECK_FALSE(f8.canonical_qp);
    CHECK(f8.report.min_weight == -2);
    CHECK(f8.reasons.empty());

    auto sw = sqp_verdict(parse_pd(kSwitched));
    CHECK(sw.sqp_yes);
    CHECK_FALSE(sw.canonical_qp);
    CHECK(sw.report.min_weight == 0);
    CHECK(sw.reasons == std::vector<std::string>{"almost-positive-diagram"});

    auto cu = sqp_verdict(parse_pd(kCurled));
    CHECK(cu.sqp_yes);
    CHECK(cu.canonical_qp);
}

TEST_CASE("pretzel closed form") {
    CHECK(pretzel_oracle(-3, -3, 1));
    CHECK_FALSE(pretzel_oracle(1, 1, 1));
    CHECK(pretzel_oracle(-1, -1, -1));
    CHECK_FALSE(pretzel_oracle(-3, 3, 1));
    CHECK_THROWS_AS(pretzel_oracle(2, 3, 5), precondition_error);
}
