#include "sqp/graph.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace sqp {

void validate_graph(const PlaneWeightedGraph& g) {
    if (static_cast<int>(g.rot.size()) != g.nv)
        throw internal_error("rotation table size mismatch");
    const int nd = 2 * g.ne();
    std::vector<int> seen(nd, 0);
    for (int v = 0; v < g.nv; ++v)
        for (int d : g.rot[v]) {
            if (d < 0 || d >= nd) throw internal_error("dart out of range");
            if (seen[d]++) throw internal_error("dart listed twice");
            if (g.dart_vertex(d) != v)
                throw internal_error("dart in wrong rotation list");
        }
    for (const auto& e : g.edges) {
        if (e.u < 0 || e.u >= g.nv || e.v < 0 || e.v >= g.nv)
            throw internal_error("edge endpoint out of range");
        if (e.u == e.v) throw internal_error("self-loop");
        if (e.w != 1 && e.w != -1) throw internal_error("edge weight must be +-1");
    }
    for (int d = 0; d < nd; ++d)
        if (!seen[d]) throw internal_error("dart missing from rotation lists");

    // per-component Euler characteristic (isolated vertices are spheres on
    // their own and need no check)
    auto comp = vertex_components(g);
    int ncomp = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<int> vcount(ncomp, 0), ecount(ncomp, 0), fcount(ncomp, 0);
    for (int v = 0; v < g.nv; ++v) ++vcount[comp[v]];
    for (const auto& e : g.edges) ++ecount[comp[e.u]];
    GraphRegions r = graph_regions(g);
    for (int i = 0; i < r.count(); ++i)
        ++fcount[comp[g.dart_vertex(r.walks[i][0])]];
    for (int c = 0; c < ncomp; ++c) {
        if (ecount[c] == 0) continue;
        if (vcount[c] - ecount[c] + fcount[c] != 2)
            throw structural_error("rotation system is not planar: component " +
                                   std::to_string(c) + " has V=" +
                                   std::to_string(vcount[c]) + " E=" +
                                   std::to_string(ecount[c]) + " F=" +
                                   std::to_string(fcount[c]));
    }
}

GraphRegions graph_regions(const PlaneWeightedGraph& g) {
    const int nd = 2 * g.ne();
    std::vector<int> pos(nd, -1);
    for (int v = 0; v < g.nv; ++v)
        for (size_t i = 0; i < g.rot[v].size(); ++i) pos[g.rot[v][i]] = static_cast<int>(i);

    GraphRegions r;
    r.region_of.assign(nd, -1);
    for (int start = 0; start < nd; ++start) {
        if (r.region_of[start] != -1) continue;
        int id = r.count();
        r.walks.emplace_back();
        r.weight.push_back(0);
        int d = start;
        do {
            r.region_of[d] = id;
            r.walks[id].push_back(d);
            r.weight[id] += g.edges[d >> 1].w;
            int t = d ^ 1;
            int x = g.dart_vertex(t);
            int i = pos[t];
            if (i < 0) throw internal_error("dart not in rotation table");
            d = g.rot[x][(i + 1) % g.rot[x].size()];
        } while (d != start);
    }
    return r;
}

std::vector<int> bipartition(const PlaneWeightedGraph& g) {
    std::vector<int> colour(g.nv, -1);
    std::vector<int> stack;
    for (int s = 0; s < g.nv; ++s) {
        if (colour[s] != -1) continue;
        colour[s] = 0;
        stack.push_back(s);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int d : g.rot[v]) {
                int w = g.dart_other(d);
                if (colour[w] == -1) {
                    colour[w] = 1 - colour[v];
                    stack.push_back(w);
                } else if (colour[w] == colour[v]) {
                    throw reduction_invariant_error(
                        "graph is not bipartite: vertices " + std::to_string(v) +
                        " and " + std::to_string(w) +
                        " are adjacent with equal colour");
                }
            }
        }
    }
    return colour;
}

std::vector<int> vertex_components(const PlaneWeightedGraph& g) {
    UnionFind uf(g.nv);
    for (const auto& e : g.edges) uf.unite(e.u, e.v);
    std::vector<int> comp(g.nv, -1);
    std::map<int, int> index;
    for (int v = 0; v < g.nv; ++v) {
        int r = uf.find(v);
        auto it = index.find(r);
        if (it == index.end()) it = index.emplace(r, static_cast<int>(index.size())).first;
        comp[v] = it->second;
    }
    return comp;
}

Blocks biconnected_blocks(const PlaneWeightedGraph& g) {
    Blocks out;
    out.block_of_edge.assign(g.ne(), -1);
    std::vector<int> disc(g.nv, 0), low(g.nv, 0);
    std::vector<char> is_cut(g.nv, 0);
    std::vector<int> estack;
    int timer = 0;

    struct Frame {
        int v;
        int enter_edge;  // tree edge used to reach v, -1 at a root
        size_t i = 0;    // rotation cursor
        bool skipped_parent = false;
        int children = 0;
    };
    for (int s = 0; s < g.nv; ++s) {
        if (disc[s] != 0 || g.rot[s].empty()) continue;
        std::vector<Frame> st;
        disc[s] = low[s] = ++timer;
        st.push_back({s, -1});
        while (!st.empty()) {
            Frame& f = st.back();
            if (f.i < g.rot[f.v].size()) {
                int d = g.rot[f.v][f.i++];
                int e = d >> 1;
                int w = g.dart_other(d);
                if (e == f.enter_edge && !f.skipped_parent) {
                    // skip the tree edge once; parallel copies are back edges
                    f.skipped_parent = true;
                    continue;
                }
                if (disc[w] == 0) {
                    estack.push_back(e);
                    ++f.children;
                    disc[w] = low[w] = ++timer;
                    st.push_back({w, e});
                } else if (disc[w] < disc[f.v]) {
                    estack.push_back(e);
                    low[f.v] = std::min(low[f.v], disc[w]);
                }
            } else {
                Frame done = f;
                st.pop_back();
                if (st.empty()) break;
                Frame& p = st.back();
                low[p.v] = std::min(low[p.v], low[done.v]);
                if (low[done.v] >= disc[p.v]) {
                    // the subtree under done.v closes a block at p.v
                    bool root = p.enter_edge == -1;
                    if (!root || p.children > 1) is_cut[p.v] = 1;
                    int id = static_cast<int>(out.block_edges.size());
                    out.block_edges.emplace_back();
                    int e;
                    do {
                        e = estack.back();
                        estack.pop_back();
                        out.block_of_edge[e] = id;
                        out.block_edges[id].push_back(e);
                    } while (e != done.enter_edge);
                }
            }
        }
        if (!estack.empty()) throw internal_error("unassigned block edges");
    }
    for (int v = 0; v < g.nv; ++v)
        if (is_cut[v]) out.cut_vertices.push_back(v);
    for (auto& be : out.block_edges) std::sort(be.begin(), be.end());
    return out;
}

PlaneWeightedGraph edge_subgraph(const PlaneWeightedGraph& g,
                                 const std::vector<int>& edge_ids,
                                 std::vector<int>* vmap_out) {
    std::vector<int> eids = edge_ids;
    std::sort(eids.begin(), eids.end());
    std::vector<int> new_edge(g.ne(), -1);
    for (size_t i = 0; i < eids.size(); ++i) new_edge[eids[i]] = static_cast<int>(i);

    std::vector<int> verts;
    for (int e : eids) {
        verts.push_back(g.edges[e].u);
        verts.push_back(g.edges[e].v);
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    std::vector<int> new_vertex(g.nv, -1);
    for (size_t i = 0; i < verts.size(); ++i) new_vertex[verts[i]] = static_cast<int>(i);

    PlaneWeightedGraph h;
    h.nv = static_cast<int>(verts.size());
    h.rot.resize(h.nv);
    for (int e : eids) {
        auto ed = g.edges[e];
        ed.u = new_vertex[ed.u];
        ed.v = new_vertex[ed.v];
        h.edges.push_back(ed);
    }
    for (int ov : verts)
        for (int d : g.rot[ov]) {
            int ne_id = new_edge[d >> 1];
            if (ne_id != -1) h.rot[new_vertex[ov]].push_back(2 * ne_id + (d & 1));
        }
    if (vmap_out) *vmap_out = verts;
    return h;
}

namespace {

// the list cut open just after the given element (which is removed)
std::vector<int> cut_after(const std::vector<int>& lst, int elem) {
    auto it = std::find(lst.begin(), lst.end(), elem);
    if (it == lst.end()) throw internal_error("dart not found for splice");
    std::vector<int> out;
    size_t k = static_cast<size_t>(it - lst.begin());
    for (size_t j = 1; j < lst.size(); ++j)
        out.push_back(lst[(k + j) % lst.size()]);
    return out;
}

// renumber helper shared by the structural edits
struct Renumber {
    std::vector<int> vmap, emap;
    PlaneWeightedGraph apply(const PlaneWeightedGraph& g,
                             const std::vector<std::vector<int>>& rot_before) const {
        PlaneWeightedGraph h;
        h.nv = 0;
        for (int v : vmap) h.nv = std::max(h.nv, v + 1);
        h.rot.resize(h.nv);
        for (int e = 0; e < g.ne(); ++e) {
            if (emap[e] == -1) continue;
            auto ed = g.edges[e];
            ed.u = vmap[ed.u];
            ed.v = vmap[ed.v];
            if (static_cast<int>(h.edges.size()) != emap[e])
                throw internal_error("edge renumbering out of order");
            h.edges.push_back(ed);
        }
        for (size_t ov = 0; ov < rot_before.size(); ++ov) {
            if (vmap[ov] == -1) continue;
            for (int d : rot_before[ov]) {
                int ne_id = emap[d >> 1];
                if (ne_id == -1)
                    throw internal_error("rotation references removed edge");
                h.rot[vmap[ov]].push_back(2 * ne_id + (d & 1));
            }
        }
        return h;
    }
};

}  // namespace

PlaneWeightedGraph contract_edge(const PlaneWeightedGraph& g, int e,
                                 std::vector<int>* vertex_map,
                                 std::vector<int>* edge_map) {
    int u = g.edges[e].u, v = g.edges[e].v;
    if (u == v) throw internal_error("contracting a self-loop");
    for (int f = 0; f < g.ne(); ++f)
        if (f != e && ((g.edges[f].u == u && g.edges[f].v == v) ||
                       (g.edges[f].u == v && g.edges[f].v == u)))
            throw internal_error("contraction would create a self-loop");

    auto rot2 = g.rot;
    std::vector<int> a = cut_after(rot2[u], 2 * e);
    std::vector<int> b = cut_after(rot2[v], 2 * e + 1);
    a.insert(a.end(), b.begin(), b.end());
    rot2[u] = a;
    rot2[v].clear();

    // move v's edges to u before renumbering
    PlaneWeightedGraph tmp = g;
    tmp.rot = rot2;
    for (auto& ed : tmp.edges) {
        if (ed.u == v) ed.u = u;
        if (ed.v == v) ed.v = u;
    }

    Renumber rn;
    rn.vmap.assign(g.nv, -1);
    for (int w = 0; w < g.nv; ++w)
        rn.vmap[w] = (w == v) ? (u < v ? u : u - 1) : (w < v ? w : w - 1);
    rn.emap.assign(g.ne(), -1);
    for (int f = 0, k = 0; f < g.ne(); ++f) rn.emap[f] = (f == e) ? -1 : k++;
    if (vertex_map) *vertex_map = rn.vmap;
    if (edge_map) *edge_map = rn.emap;
    return rn.apply(tmp, tmp.rot);
}

PlaneWeightedGraph delete_edge(const PlaneWeightedGraph& g, int e,
                               std::vector<int>* edge_map) {
    PlaneWeightedGraph tmp = g;
    for (auto& lst : tmp.rot)
        lst.erase(std::remove_if(lst.begin(), lst.end(),
                                 [&](int d) { return (d >> 1) == e; }),
                  lst.end());
    Renumber rn;
    rn.vmap.resize(g.nv);
    for (int v = 0; v < g.nv; ++v) rn.vmap[v] = v;
    rn.emap.assign(g.ne(), -1);
    for (int f = 0, k = 0; f < g.ne(); ++f) rn.emap[f] = (f == e) ? -1 : k++;
    if (edge_map) *edge_map = rn.emap;
    return rn.apply(tmp, tmp.rot);
}

PlaneWeightedGraph merge_vertices(const PlaneWeightedGraph& g, int a, int cut_a,
                                  int b, int cut_b,
                                  std::vector<int>* vertex_map) {
    if (a == b) throw internal_error("merging a vertex with itself");
    for (const auto& ed : g.edges)
        if ((ed.u == a && ed.v == b) || (ed.u == b && ed.v == a))
            throw internal_error("merging adjacent vertices would self-loop");
    auto rot2 = g.rot;
    std::vector<int> la = rot2[a], lb = rot2[b];
    std::vector<int> merged;
    for (size_t j = 1; j <= la.size(); ++j) merged.push_back(la[(cut_a + j) % la.size()]);
    for (size_t j = 1; j <= lb.size(); ++j) merged.push_back(lb[(cut_b + j) % lb.size()]);
    rot2[a] = merged;
    rot2[b].clear();

    PlaneWeightedGraph tmp = g;
    tmp.rot = rot2;
    for (auto& ed : tmp.edges) {
        if (ed.u == b) ed.u = a;
        if (ed.v == b) ed.v = a;
    }
    Renumber rn;
    rn.vmap.assign(g.nv, -1);
    for (int w = 0; w < g.nv; ++w)
        rn.vmap[w] = (w == b) ? (a < b ? a : a - 1) : (w < b ? w : w - 1);
    rn.emap.resize(g.ne());
    for (int f = 0; f < g.ne(); ++f) rn.emap[f] = f;
    if (vertex_map) *vertex_map = rn.vmap;
    return rn.apply(tmp, tmp.rot);
}

PlaneWeightedGraph insert_path(const PlaneWeightedGraph& g, int a, int cut_a,
                               int b, int cut_b, int k) {
    if (k < 1) throw internal_error("insert_path needs at least one edge");
    if (a == b) throw internal_error("insert_path endpoints must differ");
    PlaneWeightedGraph h = g;
    int e0 = h.ne();
    std::vector<int> chain{a};
    for (int i = 0; i < k - 1; ++i) {
        chain.push_back(h.nv);
        h.rot.emplace_back();
        ++h.nv;
    }
    chain.push_back(b);
    for (int i = 0; i < k; ++i)
        h.edges.push_back({chain[i], chain[i + 1], +1, -1});
    // endpoint darts go just after the chosen corner positions
    auto place = [](std::vector<int>& lst, int cut, int dart) {
        if (lst.empty())
            lst.push_back(dart);
        else
            lst.insert(lst.begin() + (cut + 1), dart);
    };
    place(h.rot[a], cut_a, 2 * e0);
    place(h.rot[b], cut_b, 2 * (e0 + k - 1) + 1);
    for (int i = 0; i < k - 1; ++i) {
        int p = chain[i + 1];
        h.rot[p] = {2 * (e0 + i) + 1, 2 * (e0 + i + 1)};
    }
    return h;
}

std::vector<std::pair<int, int>> rot_positions(const PlaneWeightedGraph& g) {
    std::vector<std::pair<int, int>> pos(2 * g.ne(), {-1, -1});
    for (int v = 0; v < g.nv; ++v)
        for (size_t i = 0; i < g.rot[v].size(); ++i)
            pos[g.rot[v][i]] = {v, static_cast<int>(i)};
    return pos;
}

std::vector<int> region_profile(const GraphRegions& r) {
    std::vector<int> f;
    for (int i = 0; i < r.count(); ++i) {
        int len = r.length(i);
        if (len % 2 != 0)
            throw internal_error("odd region boundary in bipartite graph");
        int idx = len / 2 - 1;
        if (idx >= static_cast<int>(f.size())) f.resize(idx + 1, 0);
        ++f[idx];
    }
    return f;
}

bool profile_less(const std::vector<int>& a, const std::vector<int>& b) {
    size_t n = std::max(a.size(), b.size());
    auto get = [](const std::vector<int>& v, size_t i) {
        return i < v.size() ? v[i] : 0;
    };
    for (size_t i = n; i-- > 0;) {
        int x = get(a, i), y = get(b, i);
        if (x != y) return x < y;
    }
    return false;
}

std::string serialize_graph(const PlaneWeightedGraph& g) {
    std::ostringstream o;
    o << "v " << g.nv << '\n';
    for (const auto& e : g.edges)
        o << "e " << e.u << ' ' << e.v << ' ' << (e.w > 0 ? "+1" : "-1") << ' '
          << e.tag << '\n';
    for (int v = 0; v < g.nv; ++v) {
        o << "rot " << v;
        for (int d : g.rot[v]) o << ' ' << (d >> 1) << ':' << (d & 1);
        o << '\n';
    }
    return o.str();
}

PlaneWeightedGraph parse_graph(const std::string& text) {
    PlaneWeightedGraph g;
    std::istringstream in(text);
    std::string line;
    bool have_v = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "v") {
            if (!(ls >> g.nv) || g.nv < 0) throw parse_error("bad v line");
            g.rot.assign(g.nv, {});
            have_v = true;
        } else if (kw == "e") {
            PlaneWeightedGraph::Edge e;
            std::string w;
            if (!(ls >> e.u >> e.v >> w >> e.tag)) throw parse_error("bad e line");
            if (w == "+1")
                e.w = 1;
            else if (w == "-1")
                e.w = -1;
            else
                throw parse_error("bad edge weight " + w);
            g.edges.push_back(e);
        } else if (kw == "rot") {
            int v;
            if (!(ls >> v) || v < 0 || v >= g.nv) throw parse_error("bad rot line");
            std::string tok;
            while (ls >> tok) {
                size_t c = tok.find(':');
                if (c == std::string::npos) throw parse_error("bad dart " + tok);
                int e = std::stoi(tok.substr(0, c));
                int side = std::stoi(tok.substr(c + 1));
                if (e < 0 || e >= g.ne() || (side != 0 && side != 1))
                    throw parse_error("bad dart " + tok);
                g.rot[v].push_back(2 * e + side);
            }
        } else {
            throw parse_error("unknown graph line " + kw);
        }
    }
    if (!have_v) throw parse_error("graph text lacks v line");
    validate_graph(g);
    return g;
}

}  // namespace sqp
