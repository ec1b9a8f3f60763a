#include "sqp/certify.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqp/criterion.hpp"

namespace sqp {

namespace {

constexpr const char* kTagSum = "murasugi-sum";
constexpr const char* kTagIso = "isotopy";
constexpr const char* kTagSub = "subsurface";
constexpr const char* kTagBase = "base";

int cyc_dist(int i, int j, int l) {
    int a = std::abs(i - j) % l;
    return std::min(a, l - a);
}

std::vector<std::vector<int>> incident_edges(const PlaneWeightedGraph& g) {
    std::vector<std::vector<int>> at(g.nv);
    for (int e = 0; e < g.ne(); ++e) {
        at[g.edges[e].u].push_back(e);
        at[g.edges[e].v].push_back(e);
    }
    return at;
}

// All vertex-simple paths src->dst, recursively, edges in ascending order.
// False as soon as one path weighs less than the threshold.
bool paths_at_least(const PlaneWeightedGraph& g, int src, int dst,
                    int threshold, WorkBudget& budget) {
    auto at = incident_edges(g);
    std::vector<char> vis(g.nv, 0);
    bool ok = true;
    std::function<void(int, int)> dfs = [&](int u, int wsum) {
        if (u == dst) {
            if (wsum < threshold) ok = false;
            return;
        }
        vis[u] = 1;
        for (int e : at[u]) {
            if (!ok) break;
            budget.tick();
            int o = g.edges[e].u == u ? g.edges[e].v : g.edges[e].u;
            if (vis[o]) continue;
            dfs(o, wsum + g.edges[e].w);
        }
        vis[u] = 0;
    };
    dfs(src, 0);
    return ok;
}

// The verifier's own enumeration: iterative and in descending edge order, so
// a bug in the recursive scan will not hide itself here.
bool paths_at_least_replay(const PlaneWeightedGraph& g, int src, int dst,
                           int threshold, WorkBudget& budget) {
    auto at = incident_edges(g);
    for (auto& lst : at) std::sort(lst.rbegin(), lst.rend());
    struct Frame {
        int v;
        size_t i;
        int wsum;
    };
    std::vector<char> vis(g.nv, 0);
    std::vector<Frame> st;
    st.push_back({src, 0, 0});
    vis[src] = 1;
    while (!st.empty()) {
        Frame& f = st.back();
        if (f.i >= at[f.v].size()) {
            vis[f.v] = 0;
            st.pop_back();
            continue;
        }
        int e = at[f.v][f.i++];
        budget.tick();
        int o = g.edges[e].u == f.v ? g.edges[e].v : g.edges[e].u;
        int nw = f.wsum + g.edges[e].w;
        if (o == dst) {
            if (nw < threshold) return false;
            continue;
        }
        if (vis[o]) continue;
        vis[o] = 1;
        st.push_back({o, 0, nw});
    }
    return true;
}

std::vector<PlaneWeightedGraph> component_pieces(const PlaneWeightedGraph& g) {
    auto comp = vertex_components(g);
    int nc = 0;
    for (int c : comp) nc = std::max(nc, c + 1);
    std::vector<std::vector<int>> ce(nc);
    for (int e = 0; e < g.ne(); ++e) ce[comp[g.edges[e].u]].push_back(e);
    std::vector<PlaneWeightedGraph> out;
    for (int c = 0; c < nc; ++c) {
        if (!ce[c].empty()) {
            out.push_back(edge_subgraph(g, ce[c]));
            continue;
        }
        PlaneWeightedGraph one;
        one.nv = 1;
        one.rot.assign(1, {});
        out.push_back(one);
    }
    return out;
}

PlaneWeightedGraph bare_vertex_graph() {
    PlaneWeightedGraph one;
    one.nv = 1;
    one.rot.assign(1, {});
    return one;
}

}  // namespace

StarReport property_star(const PlaneWeightedGraph& g, long long work_cap) {
    StarReport s;
    try {
        validate_graph(g);
        s.plane = true;
    } catch (const error&) {
    }
    s.cycles_positive = is_canonical_qp(g, work_cap);
    auto comp = vertex_components(g);
    bool connected = g.nv > 0;
    for (int c : comp) connected = connected && c == 0;
    auto bl = biconnected_blocks(g);
    s.two_connected = g.nv >= 3 && connected && bl.cut_vertices.empty();
    s.no_mixed_degree2 = true;
    for (int v = 0; v < g.nv; ++v) {
        if (g.degree(v) != 2) continue;
        int a = g.rot[v][0] >> 1, b = g.rot[v][1] >> 1;
        if (g.edges[a].w + g.edges[b].w == 0) s.no_mixed_degree2 = false;
    }
    return s;
}

PlaneWeightedGraph reduce_RII(const PlaneWeightedGraph& g, int v) {
    if (v < 0 || v >= g.nv) throw precondition_error("no such vertex");
    if (g.degree(v) != 2) throw precondition_error("vertex degree is not 2");
    int d1 = g.rot[v][0], d2 = g.rot[v][1];
    int e1 = d1 >> 1, e2 = d2 >> 1;
    if (e1 == e2) throw precondition_error("vertex carries a doubled dart");
    if (g.edges[e1].w + g.edges[e2].w != 0)
        throw precondition_error(
            "vertex is not flanked by one positive and one negative band");
    int u = g.dart_other(d1), w = g.dart_other(d2);
    if (u == w) {
        // both bands run to the same neighbour; removal leaves v bare
        auto h = delete_edge(g, std::max(e1, e2));
        h = delete_edge(h, std::min(e1, e2));
        PlaneWeightedGraph out;
        out.nv = h.nv - 1;
        for (auto ed : h.edges) {
            if (ed.u > v) --ed.u;
            if (ed.v > v) --ed.v;
            out.edges.push_back(ed);
        }
        for (int x = 0; x < h.nv; ++x)
            if (x != v) out.rot.push_back(h.rot[x]);
        return out;
    }
    std::vector<int> emap;
    auto h = contract_edge(g, e1, nullptr, &emap);
    return contract_edge(h, emap[e2]);
}

PlaneWeightedGraph delete_parallel_positive(const PlaneWeightedGraph& g,
                                            int e1, int e2) {
    if (e1 < 0 || e2 < 0 || e1 >= g.ne() || e2 >= g.ne() || e1 == e2)
        throw precondition_error("two distinct edges required");
    const auto& a = g.edges[e1];
    const auto& b = g.edges[e2];
    bool parallel = (a.u == b.u && a.v == b.v) || (a.u == b.v && a.v == b.u);
    if (!parallel) throw precondition_error("edges are not parallel");
    if (a.w <= 0 || b.w <= 0)
        throw precondition_error("both edges must be positive");
    auto r = graph_regions(g);
    bool bigon = false;
    for (int i = 0; i < r.count() && !bigon; ++i) {
        if (r.length(i) != 2) continue;
        int x = r.walks[i][0] >> 1, y = r.walks[i][1] >> 1;
        bigon = std::minmax(x, y) == std::minmax(e1, e2);
    }
    if (!bigon) throw precondition_error("edges do not bound an empty bigon");
    return delete_edge(g, e2);
}

CutSplit split_cut_vertex(const PlaneWeightedGraph& g) {
    auto comp = vertex_components(g);
    for (int c : comp)
        if (c != 0) throw precondition_error("graph is not connected");
    auto bl = biconnected_blocks(g);
    bool has_bridge = false;
    for (auto& be : bl.block_edges) has_bridge = has_bridge || be.size() == 1;
    if (bl.cut_vertices.empty() && !has_bridge)
        throw precondition_error("no cut vertex or bridge to split at");

    CutSplit out;
    std::vector<std::vector<int>> kept;
    for (auto& be : bl.block_edges) {
        if (be.size() == 1) {
            out.bridges.push_back(be[0]);
            continue;
        }
        auto ids = be;
        std::sort(ids.begin(), ids.end());
        kept.push_back(ids);
    }
    std::sort(out.bridges.begin(), out.bridges.end());
    std::sort(kept.begin(), kept.end());
    std::vector<char> covered(g.nv, 0);
    for (auto& ids : kept) {
        for (int e : ids) {
            covered[g.edges[e].u] = 1;
            covered[g.edges[e].v] = 1;
        }
        out.pieces.push_back(edge_subgraph(g, ids));
    }
    for (int v = 0; v < g.nv; ++v)
        if (!covered[v]) out.bare_vertices.push_back(v);
    return out;
}

MurasugiPieces murasugi_split(const SmoothedMap& m, int k) {
    int K = static_cast<int>(m.circles.size());
    if (k < 0 || k >= K) throw precondition_error("no such circle");
    if (m.fs.components != 1)
        throw precondition_error("splitting needs a connected diagram");
    std::vector<char> inside(K, 0);
    inside[k] = 1;
    for (int j = 0; j < K; ++j)
        if (j != k && nested(m, k, j)) inside[j] = 1;

    const Diagram& d = m.d;
    int maxlab = 0;
    for (const auto& x : d.xs)
        for (int s = 0; s < 4; ++s) maxlab = std::max(maxlab, x.s[s]);
    for (int l : d.loops) maxlab = std::max(maxlab, l);

    std::vector<char> xin(d.n(), 0), xout(d.n(), 0);
    for (int x = 0; x < d.n(); ++x) {
        int cu = m.inc[x].cu, co = m.inc[x].co;
        xin[x] = inside[cu] && inside[co];
        xout[x] = (cu == k || !inside[cu]) && (co == k || !inside[co]);
        if (xin[x] == xout[x])
            throw internal_error("crossing straddles the splitting circle");
    }

    auto build = [&](bool inter) {
        auto in_set = [&](int j) {
            return inter ? inside[j] != 0 : (j == k || !inside[j]);
        };
        auto keep = [&](int x) {
            return inter ? xin[x] != 0 : xout[x] != 0;
        };
        UnionFind uf(maxlab + 1);
        for (int j = 0; j < K; ++j) {
            if (!in_set(j)) continue;
            const Circle& c = m.circles[j];
            int t = c.transitions();
            for (int i = 0; i < t; ++i)
                if (!keep(c.xing[i])) uf.unite(c.arcs[i], c.arcs[(i + 1) % t]);
        }
        std::vector<int> rep(maxlab + 1, INT_MAX);
        for (int a = 1; a <= maxlab; ++a)
            rep[uf.find(a)] = std::min(rep[uf.find(a)], a);
        Diagram out;
        for (int x = 0; x < d.n(); ++x) {
            if (!keep(x)) continue;
            Crossing c = d.xs[x];
            for (int s = 0; s < 4; ++s) c.s[s] = rep[uf.find(c.s[s])];
            out.xs.push_back(c);
        }
        for (int j = 0; j < K; ++j) {
            if (!in_set(j)) continue;
            const Circle& c = m.circles[j];
            bool has = false;
            for (int i = 0; i < c.transitions(); ++i) has = has || keep(c.xing[i]);
            if (!has) out.loops.push_back(rep[uf.find(c.arcs[0])]);
        }
        std::sort(out.loops.begin(), out.loops.end());
        validate(out);
        return out;
    };
    MurasugiPieces mp{build(true), build(false), {}, {}};
    for (int x = 0; x < d.n(); ++x)
        (xin[x] ? mp.interior_xs : mp.exterior_xs).push_back(x);
    return mp;
}

int find_heavy_region(const PlaneWeightedGraph& g, const GraphRegions& r) {
    (void)g;
    for (int i = 0; i < r.count(); ++i)
        if (r.weight[i] >= 4) return i;
    throw reduction_invariant_error("no region of boundary weight at least 4");
}

ChordSpec find_split(const PlaneWeightedGraph& g, const GraphRegions& r,
                     int region, WorkBudget& budget) {
    if (region < 0 || region >= r.count())
        throw precondition_error("no such region");
    const auto& walk = r.walks[region];
    int l = static_cast<int>(walk.size());
    std::vector<int> verts(l), ws(l);
    for (int i = 0; i < l; ++i) {
        verts[i] = g.dart_vertex(walk[i]);
        ws[i] = g.edges[walk[i] >> 1].w;
    }
    if (std::set<int>(verts.begin(), verts.end()).size() != verts.size())
        throw precondition_error("region boundary is not a simple cycle");

    auto good = [&](int v, int w, int d) {
        return paths_at_least(g, v, w, 4 - d, budget);
    };

    bool hasneg = false;
    for (int w : ws) hasneg = hasneg || w < 0;
    if (hasneg) {
        // walk recipe: positive edge, a run of negatives, next positive edge
        for (int i = 0; i < l; ++i) {
            if (!(ws[i] > 0 && ws[(i + 1) % l] < 0)) continue;
            int j = (i + 1) % l, steps = 1;
            while (ws[j] < 0 && steps <= l) {
                j = (j + 1) % l;
                ++steps;
            }
            if (steps > l) break;  // boundary had no second positive edge
            int d = steps + 1;
            int vv = verts[i], ww = verts[(j + 1) % l];
            if (vv == ww || d < 2) continue;
            if (2 * d > l) continue;  // the recipe path must be the short side
            if (good(vv, ww, d)) return {vv, ww, d};
        }
        throw reduction_invariant_error("mixed region boundary admits no chord");
    }
    std::vector<std::array<int, 3>> cands;
    for (int i = 0; i < l; ++i)
        for (int j = i + 1; j < l; ++j) {
            int d = cyc_dist(i, j, l);
            if (d < 2) continue;
            cands.push_back({std::min(verts[i], verts[j]),
                             std::max(verts[i], verts[j]), d});
        }
    std::sort(cands.begin(), cands.end());
    for (const auto& c : cands)
        if (good(c[0], c[1], c[2])) return {c[0], c[1], c[2]};
    throw reduction_invariant_error("positive region boundary admits no chord");
}

PlaneWeightedGraph insert_chord(const PlaneWeightedGraph& g, int region,
                                const ChordSpec& c) {
    auto r = graph_regions(g);
    if (region < 0 || region >= r.count())
        throw precondition_error("no such region");
    const auto& walk = r.walks[region];
    int l = static_cast<int>(walk.size());
    int pv = -1, pw = -1;
    for (int i = 0; i < l; ++i) {
        int u = g.dart_vertex(walk[i]);
        if (u == c.v) {
            if (pv >= 0)
                throw precondition_error("vertex repeats on the region boundary");
            pv = i;
        }
        if (u == c.w) {
            if (pw >= 0)
                throw precondition_error("vertex repeats on the region boundary");
            pw = i;
        }
    }
    if (c.v == c.w || pv < 0 || pw < 0)
        throw precondition_error("chord endpoints are not on the region boundary");
    if (c.d < 2 || c.d != cyc_dist(pv, pw, l))
        throw precondition_error("chord distance mismatch");
    auto pos = rot_positions(g);
    auto cut_at = [&](int i) {
        int pred = walk[(i + l - 1) % l];
        return pos[pred ^ 1].second;
    };
    PlaneWeightedGraph h =
        c.d == 2 ? merge_vertices(g, c.v, cut_at(pv), c.w, cut_at(pw))
                 : insert_path(g, c.v, cut_at(pv), c.w, cut_at(pw), c.d - 2);
    validate_graph(h);
    return h;
}

std::vector<int> edge_symmetric_difference(std::vector<int> a,
                                           std::vector<int> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<int> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(out));
    return out;
}

std::vector<std::vector<int>> cycle_decomposition(
    const PlaneWeightedGraph& g, const std::vector<int>& edge_ids) {
    std::vector<int> deg(g.nv, 0);
    std::vector<char> left(g.ne(), 0);
    for (int e : edge_ids) {
        if (e < 0 || e >= g.ne()) throw precondition_error("no such edge");
        if (left[e]) throw precondition_error("duplicate edge id");
        left[e] = 1;
        ++deg[g.edges[e].u];
        ++deg[g.edges[e].v];
    }
    for (int v = 0; v < g.nv; ++v)
        if (deg[v] % 2 != 0)
            throw precondition_error("edge set has a vertex of odd degree");
    auto order = edge_ids;
    std::sort(order.begin(), order.end());
    std::vector<std::vector<int>> at(g.nv);
    for (int e : order) {
        at[g.edges[e].u].push_back(e);
        at[g.edges[e].v].push_back(e);
    }
    std::vector<std::vector<int>> cycles;
    for (int e0 : order) {
        if (!left[e0]) continue;
        std::vector<int> pe;      // open trail, edges
        std::vector<int> pv;      // its vertices, one longer
        pv.push_back(g.edges[e0].u);
        int cur = pv.back();
        while (true) {
            int nxt = -1;
            for (int e : at[cur])
                if (left[e]) {
                    nxt = e;
                    break;
                }
            if (nxt < 0) break;
            left[nxt] = 0;
            int o = g.edges[nxt].u == cur ? g.edges[nxt].v : g.edges[nxt].u;
            pe.push_back(nxt);
            pv.push_back(o);
            for (size_t p = 0; p + 1 < pv.size(); ++p) {
                if (pv[p] != o) continue;
                cycles.emplace_back(pe.begin() + p, pe.end());
                pe.erase(pe.begin() + p, pe.end());
                pv.erase(pv.begin() + p + 1, pv.end());
                break;
            }
            cur = pv.back();
        }
        if (!pe.empty())
            throw internal_error("even edge set failed to decompose");
    }
    return cycles;
}

// ---------------------------------------------------------------------------
// reduction engine

namespace {

CertStep reduce_graph(const PlaneWeightedGraph& g, WorkBudget& budget) {
    validate_graph(g);
    if (!is_canonical_qp(g, static_cast<long long>(budget.left())))
        throw reduction_invariant_error(
            "reduction state lost the cycle-weight criterion");
    CertStep node;
    node.pre_hash = graph_hash(g);
    budget.tick(static_cast<std::uint64_t>(g.ne()) + 1);
    if (g.nv == 0) throw internal_error("empty graph piece in reduction");

    if (g.nv == 1 && g.ne() == 0) {
        node.kind = StepKind::LeafDisk;
        node.justification = kTagBase;
        return node;
    }

    auto comp = vertex_components(g);
    bool connected = true;
    for (int c : comp) connected = connected && c == 0;
    if (!connected) {
        node.kind = StepKind::SplitComponents;
        node.justification = kTagSum;
        for (auto& piece : component_pieces(g))
            node.children.push_back(reduce_graph(piece, budget));
        return node;
    }

    if (g.nv == 2 && g.ne() >= 1) {
        bool allpos = true;
        for (const auto& ed : g.edges) allpos = allpos && ed.w > 0;
        if (allpos) {
            node.kind = StepKind::LeafTorusFiber;
            node.n = g.ne();
            node.justification = kTagBase;
            return node;
        }
    }

    {
        auto bl = biconnected_blocks(g);
        bool has_bridge = false;
        for (auto& be : bl.block_edges) has_bridge = has_bridge || be.size() == 1;
        if (has_bridge || !bl.cut_vertices.empty()) {
            node.kind = StepKind::SplitCutVertex;
            node.justification = kTagSum;
            auto cs = split_cut_vertex(g);
            for (auto& piece : cs.pieces)
                node.children.push_back(reduce_graph(piece, budget));
            for (size_t i = 0; i < cs.bare_vertices.size(); ++i)
                node.children.push_back(reduce_graph(bare_vertex_graph(), budget));
            return node;
        }
    }

    for (int v = 0; v < g.nv; ++v) {
        if (g.degree(v) != 2) continue;
        int a = g.rot[v][0] >> 1, b = g.rot[v][1] >> 1;
        if (g.edges[a].w + g.edges[b].w != 0) continue;
        node.kind = StepKind::ReidemeisterII;
        node.vertex = v;
        node.justification = kTagIso;
        node.children.push_back(reduce_graph(reduce_RII(g, v), budget));
        return node;
    }

    auto regions = graph_regions(g);
    for (int r = 0; r < regions.count(); ++r) {
        if (regions.length(r) != 2) continue;
        int a = regions.walks[r][0] >> 1, b = regions.walks[r][1] >> 1;
        if (a == b || g.edges[a].w <= 0 || g.edges[b].w <= 0) continue;
        node.kind = StepKind::DeleteParallelPositive;
        node.e1 = std::min(a, b);
        node.e2 = std::max(a, b);
        node.justification = kTagSum;
        node.children.push_back(
            reduce_graph(delete_parallel_positive(g, node.e1, node.e2), budget));
        return node;
    }

    int heavy = find_heavy_region(g, regions);
    ChordSpec cs = find_split(g, regions, heavy, budget);
    auto before = region_profile(regions);
    auto g2 = insert_chord(g, heavy, cs);
    auto after = region_profile(graph_regions(g2));
    if (!profile_less(after, before))
        throw reduction_invariant_error(
            "chord insertion failed to shrink the region profile");
    node.kind = StepKind::InsertChord;
    node.region = heavy;
    node.v = cs.v;
    node.w = cs.w;
    node.d = cs.d;
    node.justification = kTagSub;
    node.children.push_back(reduce_graph(g2, budget));
    return node;
}

// smallest circle separating crossings on both sides, or -1
int split_circle(const SmoothedMap& m) {
    for (int k = 0; k < static_cast<int>(m.circles.size()); ++k)
        if (!interior_empty(m, k) && !exterior_empty(m, k)) return k;
    return -1;
}

CertStep reduce_diagram(const Diagram& d, WorkBudget& budget) {
    validate(d);
    CertStep node;
    node.pre_hash = fnv1a64(serialize_pd(d));
    budget.tick(static_cast<std::uint64_t>(d.n()) + 1);

    auto pieces = split_components(d);
    if (pieces.size() != 1) {
        node.kind = StepKind::SplitComponents;
        node.justification = kTagSum;
        for (auto& p : pieces) node.children.push_back(reduce_diagram(p, budget));
        return node;
    }

    SmoothedMap m = move_infinity(seifert_circles(d));
    int k = split_circle(m);
    if (k >= 0) {
        node.kind = StepKind::MurasugiSplit;
        node.circle = k;
        node.justification = kTagSum;
        auto mp = murasugi_split(m, k);
        node.children.push_back(reduce_diagram(mp.interior, budget));
        node.children.push_back(reduce_diagram(mp.exterior, budget));
        return node;
    }

    SeifertGraph sg = seifert_graph(m);
    if (!sg.plane)
        throw internal_error("no splitting circle but the map is not plane");
    return reduce_graph(sg.g, budget);
}

}  // namespace

Certificate certify(const PlaneWeightedGraph& g, long long work_cap) {
    validate_graph(g);
    try {
        bipartition(g);
    } catch (const reduction_invariant_error&) {
        throw precondition_error("graph is not bipartite");
    }
    if (!is_canonical_qp(g, work_cap))
        throw precondition_error("cycle-weight criterion fails; nothing to certify");
    WorkBudget budget(static_cast<std::uint64_t>(work_cap));
    Certificate c;
    c.diagram_rooted = false;
    c.root = serialize_graph(g);
    c.step = reduce_graph(g, budget);
    return c;
}

Certificate certify(const Diagram& d, long long work_cap) {
    // orientations are derived data: certify the diagram as its PD text reads
    Diagram nd = parse_pd(serialize_pd(d));
    auto sg = seifert_graph(seifert_circles(nd));
    if (!is_canonical_qp(sg, work_cap))
        throw precondition_error("cycle-weight criterion fails; nothing to certify");
    WorkBudget budget(static_cast<std::uint64_t>(work_cap));
    Certificate c;
    c.diagram_rooted = true;
    c.root = serialize_pd(nd);
    c.step = reduce_diagram(nd, budget);
    return c;
}

// ---------------------------------------------------------------------------
// replay

namespace {

struct verify_failure {
    std::string msg;
};

[[noreturn]] void vfail(const std::string& where, const std::string& what) {
    throw verify_failure{where + ": " + what};
}

const char* kind_token(StepKind k) {
    switch (k) {
        case StepKind::SplitComponents: return "split-components";
        case StepKind::SplitCutVertex: return "split-cut-vertex";
        case StepKind::MurasugiSplit: return "murasugi-split";
        case StepKind::ReidemeisterII: return "reidemeister-ii";
        case StepKind::DeleteParallelPositive: return "delete-parallel-positive";
        case StepKind::InsertChord: return "insert-chord";
        case StepKind::LeafDisk: return "disk";
        case StepKind::LeafTorusFiber: return "positive-torus-fiber";
    }
    return "?";
}

StepKind kind_from(const std::string& s) {
    for (StepKind k :
         {StepKind::SplitComponents, StepKind::SplitCutVertex,
          StepKind::MurasugiSplit, StepKind::ReidemeisterII,
          StepKind::DeleteParallelPositive, StepKind::InsertChord,
          StepKind::LeafDisk, StepKind::LeafTorusFiber})
        if (s == kind_token(k)) return k;
    throw parse_error("unknown step kind: " + s);
}

std::string at_path(const std::string& path, const CertStep& s) {
    return path + " (" + kind_token(s.kind) + ")";
}

void check_leaf(const CertStep& s, const std::string& path) {
    if (!s.children.empty()) vfail(at_path(path, s), "leaf with children");
}

void verify_graph_node(const PlaneWeightedGraph& g, const CertStep& s,
                       const std::string& path, WorkBudget& budget);

void verify_children_graphs(const std::vector<PlaneWeightedGraph>& pieces,
                            const CertStep& s, const std::string& path,
                            WorkBudget& budget) {
    if (pieces.size() != s.children.size())
        vfail(at_path(path, s), "child count mismatch");
    for (size_t i = 0; i < pieces.size(); ++i)
        verify_graph_node(pieces[i], s.children[i],
                          path + "." + std::to_string(i), budget);
}

void verify_graph_node(const PlaneWeightedGraph& g, const CertStep& s,
                       const std::string& path, WorkBudget& budget) {
    const std::string here = at_path(path, s);
    try {
        validate_graph(g);
    } catch (const error& e) {
        vfail(here, std::string("invalid state: ") + e.what());
    }
    if (graph_hash(g) != s.pre_hash) vfail(here, "state hash mismatch");
    switch (s.kind) {
        case StepKind::LeafDisk:
            if (g.nv != 1 || g.ne() != 0)
                vfail(here, "disk leaf is not a bare vertex");
            check_leaf(s, path);
            return;
        case StepKind::LeafTorusFiber: {
            if (g.nv != 2 || s.n < 1 || g.ne() != s.n)
                vfail(here, "fiber leaf is not two circles with n bands");
            for (const auto& ed : g.edges)
                if (ed.w <= 0) vfail(here, "fiber leaf has a negative band");
            check_leaf(s, path);
            return;
        }
        case StepKind::SplitComponents: {
            auto pieces = component_pieces(g);
            if (pieces.size() < 2) vfail(here, "split of a connected graph");
            verify_children_graphs(pieces, s, path, budget);
            return;
        }
        case StepKind::SplitCutVertex: {
            CutSplit cs;
            try {
                cs = split_cut_vertex(g);
            } catch (const error& e) {
                vfail(here, e.what());
            }
            std::vector<PlaneWeightedGraph> pieces = cs.pieces;
            for (size_t i = 0; i < cs.bare_vertices.size(); ++i)
                pieces.push_back(bare_vertex_graph());
            verify_children_graphs(pieces, s, path, budget);
            return;
        }
        case StepKind::ReidemeisterII: {
            PlaneWeightedGraph h;
            try {
                h = reduce_RII(g, s.vertex);
            } catch (const error& e) {
                vfail(here, e.what());
            }
            verify_children_graphs({h}, s, path, budget);
            return;
        }
        case StepKind::DeleteParallelPositive: {
            PlaneWeightedGraph h;
            try {
                h = delete_parallel_positive(g, s.e1, s.e2);
            } catch (const error& e) {
                vfail(here, e.what());
            }
            verify_children_graphs({h}, s, path, budget);
            return;
        }
        case StepKind::InsertChord: {
            auto r = graph_regions(g);
            if (s.region < 0 || s.region >= r.count())
                vfail(here, "no such region");
            if (r.weight[s.region] < 4) vfail(here, "chord region is not heavy");
            if (s.v == s.w) vfail(here, "chord endpoints coincide");
            const auto& walk = r.walks[s.region];
            int l = static_cast<int>(walk.size());
            int pv = -1, pw = -1;
            for (int i = 0; i < l; ++i) {
                int u = g.dart_vertex(walk[i]);
                if (u == s.v) pv = i;
                if (u == s.w) pw = i;
            }
            if (pv < 0 || pw < 0)
                vfail(here, "chord endpoints are not on the region boundary");
            if (s.d < 2 || s.d != cyc_dist(pv, pw, l))
                vfail(here, "chord distance mismatch");
            bool far_enough = false;
            try {
                far_enough =
                    paths_at_least_replay(g, s.v, s.w, 4 - s.d, budget);
            } catch (const resource_error&) {
                throw;
            }
            if (!far_enough) vfail(here, "a path beats the chord threshold");
            PlaneWeightedGraph h;
            try {
                h = insert_chord(g, s.region, {s.v, s.w, s.d});
            } catch (const error& e) {
                vfail(here, e.what());
            }
            if (!profile_less(region_profile(graph_regions(h)),
                              region_profile(r)))
                vfail(here, "region profile did not drop");
            verify_children_graphs({h}, s, path, budget);
            return;
        }
        case StepKind::MurasugiSplit:
            vfail(here, "diagram step applied to a graph state");
    }
}

void verify_diagram_node(const Diagram& d, const CertStep& s,
                         const std::string& path, WorkBudget& budget) {
    const std::string here = at_path(path, s);
    if (s.kind == StepKind::SplitComponents) {
        if (fnv1a64(serialize_pd(d)) != s.pre_hash)
            vfail(here, "state hash mismatch");
        auto pieces = split_components(d);
        if (pieces.size() == 1) vfail(here, "split of a connected diagram");
        if (pieces.size() != s.children.size())
            vfail(here, "child count mismatch");
        for (size_t i = 0; i < pieces.size(); ++i)
            verify_diagram_node(pieces[i], s.children[i],
                                path + "." + std::to_string(i), budget);
        return;
    }
    if (s.kind == StepKind::MurasugiSplit) {
        if (fnv1a64(serialize_pd(d)) != s.pre_hash)
            vfail(here, "state hash mismatch");
        SmoothedMap m = move_infinity(seifert_circles(d));
        if (m.fs.components != 1) vfail(here, "diagram is split");
        int K = static_cast<int>(m.circles.size());
        if (s.circle < 0 || s.circle >= K) vfail(here, "no such circle");
        if (interior_empty(m, s.circle) || exterior_empty(m, s.circle))
            vfail(here, "circle does not separate the diagram");
        MurasugiPieces mp;
        try {
            mp = murasugi_split(m, s.circle);
        } catch (const error& e) {
            vfail(here, e.what());
        }
        if (s.children.size() != 2) vfail(here, "child count mismatch");
        verify_diagram_node(mp.interior, s.children[0], path + ".0", budget);
        verify_diagram_node(mp.exterior, s.children[1], path + ".1", budget);
        return;
    }
    // hand-off: the plane diagram's Seifert graph carries the remaining steps
    SmoothedMap m = move_infinity(seifert_circles(d));
    SeifertGraph sg = seifert_graph(m);
    if (!sg.plane) vfail(here, "map is not plane at the graph hand-off");
    verify_graph_node(sg.g, s, path, budget);
}

}  // namespace

bool verify(const Certificate& c, std::string* why, long long work_cap) {
    WorkBudget budget(static_cast<std::uint64_t>(work_cap));
    try {
        if (c.diagram_rooted) {
            Diagram d = parse_pd(c.root);
            verify_diagram_node(d, c.step, "root", budget);
        } else {
            PlaneWeightedGraph g = parse_graph(c.root);
            verify_graph_node(g, c.step, "root", budget);
        }
    } catch (const verify_failure& f) {
        if (why) *why = f.msg;
        return false;
    } catch (const resource_error&) {
        throw;
    } catch (const error& e) {
        if (why) *why = e.what();
        return false;
    }
    if (why) why->clear();
    return true;
}

// ---------------------------------------------------------------------------
// JSON form

namespace {

using nlohmann::json;

std::string hash_hex(std::uint64_t h) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

json step_to_json(const CertStep& s) {
    json j;
    j["kind"] = kind_token(s.kind);
    j["justification"] = s.justification;
    j["pre"] = hash_hex(s.pre_hash);
    switch (s.kind) {
        case StepKind::MurasugiSplit:
            j["circle"] = s.circle;
            break;
        case StepKind::ReidemeisterII:
            j["vertex"] = s.vertex;
            break;
        case StepKind::DeleteParallelPositive:
            j["e1"] = s.e1;
            j["e2"] = s.e2;
            break;
        case StepKind::InsertChord:
            j["region"] = s.region;
            j["v"] = s.v;
            j["w"] = s.w;
            j["d"] = s.d;
            break;
        case StepKind::LeafTorusFiber:
            j["n"] = s.n;
            break;
        default:
            break;
    }
    if (s.kind != StepKind::LeafDisk && s.kind != StepKind::LeafTorusFiber) {
        j["children"] = json::array();
        for (const auto& ch : s.children) j["children"].push_back(step_to_json(ch));
    }
    return j;
}

int get_int(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw parse_error(std::string("certificate step lacks integer '") + key +
                          "'");
    return j[key].get<int>();
}

CertStep step_from_json(const json& j) {
    if (!j.is_object()) throw parse_error("certificate step is not an object");
    if (!j.contains("kind") || !j["kind"].is_string())
        throw parse_error("certificate step lacks its kind");
    CertStep s;
    s.kind = kind_from(j["kind"].get<std::string>());
    if (j.contains("justification") && j["justification"].is_string())
        s.justification = j["justification"].get<std::string>();
    if (!j.contains("pre") || !j["pre"].is_string())
        throw parse_error("certificate step lacks its state hash");
    try {
        s.pre_hash = std::stoull(j["pre"].get<std::string>(), nullptr, 16);
    } catch (const std::exception&) {
        throw parse_error("bad state hash");
    }
    switch (s.kind) {
        case StepKind::MurasugiSplit:
            s.circle = get_int(j, "circle");
            break;
        case StepKind::ReidemeisterII:
            s.vertex = get_int(j, "vertex");
            break;
        case StepKind::DeleteParallelPositive:
            s.e1 = get_int(j, "e1");
            s.e2 = get_int(j, "e2");
            break;
        case StepKind::InsertChord:
            s.region = get_int(j, "region");
            s.v = get_int(j, "v");
            s.w = get_int(j, "w");
            s.d = get_int(j, "d");
            break;
        case StepKind::LeafTorusFiber:
            s.n = get_int(j, "n");
            break;
        default:
            break;
    }
    if (j.contains("children")) {
        if (!j["children"].is_array())
            throw parse_error("certificate children must form an array");
        for (const auto& ch : j["children"])
            s.children.push_back(step_from_json(ch));
    }
    return s;
}

}  // namespace

std::string serialize_certificate(const Certificate& c) {
    json j;
    j["root-kind"] = c.diagram_rooted ? "diagram" : "graph";
    j["root"] = c.root;
    j["step"] = step_to_json(c.step);
    return j.dump(2) + "\n";
}

Certificate parse_certificate(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception&) {
        throw parse_error("certificate is not valid JSON");
    }
    if (!j.is_object() || !j.contains("root-kind") || !j.contains("root") ||
        !j.contains("step") || !j["root-kind"].is_string() ||
        !j["root"].is_string())
        throw parse_error("certificate lacks root-kind, root or step");
    Certificate c;
    std::string rk = j["root-kind"].get<std::string>();
    if (rk == "diagram")
        c.diagram_rooted = true;
    else if (rk == "graph")
        c.diagram_rooted = false;
    else
        throw parse_error("unknown root kind: " + rk);
    c.root = j["root"].get<std::string>();
    c.step = step_from_json(j["step"]);
    return c;
}

std::string certificate_status(const Diagram& d, long long work_cap) {
    try {
        Certificate c = certify(d, work_cap);
        std::string why;
        if (verify(c, &why, work_cap)) return "verified";
        return "failed: " + (why.empty() ? std::string("certificate replay failed")
                                         : why);
    } catch (const precondition_error& e) {
        return std::string("not-applicable: ") + e.what();
    } catch (const resource_error& e) {
        return std::string("failed: ") + e.what();
    } catch (const reduction_invariant_error& e) {
        return std::string("failed: ") + e.what();
    }
}

}  // namespace sqp
