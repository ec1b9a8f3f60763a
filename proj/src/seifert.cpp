#include "sqp/seifert.hpp"

#include <algorithm>

namespace sqp {

int SmoothedMap::region_of_arc_left(int x, int s) const {
    return region_of_face[fs.left_of_dart(x, s)];
}

namespace {

// tree structure rebuild for one component, keeping the chosen root
void build_tree(SmoothedMap& m, int comp) {
    int root = m.outer_region[comp];
    std::vector<std::vector<std::pair<int, int>>> adj(m.region_count);
    for (size_t k = 0; k < m.circles.size(); ++k) {
        if (m.comp_of_circle[k] != comp) continue;
        adj[m.left_region[k]].push_back({static_cast<int>(k), m.right_region[k]});
        adj[m.right_region[k]].push_back({static_cast<int>(k), m.left_region[k]});
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());

    m.region_parent[root] = -1;
    m.region_parent_circle[root] = -1;
    std::vector<int> queue{root};
    std::vector<char> seen(m.region_count, 0);
    seen[root] = 1;
    int reached = 0;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int r = queue[qi];
        ++reached;
        for (auto [k, other] : adj[r]) {
            if (seen[other]) continue;
            seen[other] = 1;
            m.region_parent[other] = r;
            m.region_parent_circle[other] = k;
            m.inner_region[k] = other;
            queue.push_back(other);
        }
    }
    int comp_regions = 0;
    for (int r = 0; r < m.region_count; ++r)
        if (m.comp_of_region[r] == comp) ++comp_regions;
    if (reached != comp_regions)
        throw internal_error("region adjacency of a component is not a tree");
}

}  // namespace

SmoothedMap seifert_circles(const Diagram& d) {
    validate(d);
    SmoothedMap m;
    m.d = d;
    m.fs = faces(d);
    auto tab = arc_table(d);
    const int n = d.n();

    // head/tail ends per arc
    struct Ends {
        int hx = -1, hs = -1, tx = -1, ts = -1;
    };
    std::map<int, Ends> ends;
    for (const auto& [lab, e] : tab) {
        Ends w;
        for (auto [x, s] : e.at) {
            if (d.xs[x].in(s)) {
                w.hx = x;
                w.hs = s;
            } else {
                w.tx = x;
                w.ts = s;
            }
        }
        if (w.hx < 0 || w.tx < 0)
            throw internal_error("arc without head/tail after validation");
        ends[lab] = w;
    }

    // trace circles: follow the arc to its head, leave through the smoothed
    // crossing on the same side of the corridor
    m.circle_of_arc_end.assign(4 * n, -1);
    m.inc.assign(n, {});
    std::map<int, int> circle_of_label;
    for (const auto& [start, e0] : tab) {
        if (circle_of_label.count(start)) continue;
        int id = static_cast<int>(m.circles.size());
        Circle c;
        int a = start;
        do {
            circle_of_label[a] = id;
            c.arcs.push_back(a);
            const Ends& w = ends[a];
            m.circle_of_arc_end[4 * w.hx + w.hs] = id;
            m.circle_of_arc_end[4 * w.tx + w.ts] = id;
            bool under = w.hs == 0;
            int pos = static_cast<int>(c.xing.size());
            c.xing.push_back(w.hx);
            c.as_under.push_back(under ? 1 : 0);
            if (under) {
                m.inc[w.hx].cu = id;
                m.inc[w.hx].pos_u = pos;
            } else {
                m.inc[w.hx].co = id;
                m.inc[w.hx].pos_o = pos;
            }
            int cont = under ? 4 - d.xs[w.hx].over_in : 2;
            a = d.xs[w.hx].s[cont];
        } while (a != start);
        m.circles.push_back(std::move(c));
    }
    for (size_t l = 0; l < d.loops.size(); ++l) {
        int id = static_cast<int>(m.circles.size());
        Circle c;
        c.arcs.push_back(d.loops[l]);
        m.circles.push_back(std::move(c));
        m.loop_circle.push_back(id);
    }
    for (int x = 0; x < n; ++x)
        if (m.inc[x].cu < 0 || m.inc[x].co < 0 || m.inc[x].cu == m.inc[x].co)
            throw internal_error(
                "oriented smoothing must join two distinct circles at crossing " +
                std::to_string(x));

    // regions: faces merged through the smoothed-out corridors
    UnionFind uf(m.fs.count());
    for (int x = 0; x < n; ++x) {
        int c0 = d.xs[x].sign() > 0 ? 0 : 1;
        uf.unite(m.fs.corner(x, c0), m.fs.corner(x, c0 + 2));
    }
    m.region_of_face.assign(m.fs.count(), -1);
    m.comp_of_region.clear();
    std::map<int, int> root_to_region;
    for (int f = 0; f < m.fs.count(); ++f) {
        int r = uf.find(f);
        auto it = root_to_region.find(r);
        if (it == root_to_region.end()) {
            it = root_to_region.emplace(r, m.region_count++).first;
            m.comp_of_region.push_back(m.fs.comp_of_face[f]);
        }
        m.region_of_face[f] = it->second;
    }

    // circle sides; constant along the whole circle
    const int nc = static_cast<int>(m.circles.size());
    m.left_region.assign(nc, -1);
    m.right_region.assign(nc, -1);
    m.comp_of_circle.assign(nc, -1);
    for (int k = 0; k < nc; ++k) {
        const Circle& c = m.circles[k];
        if (c.transitions() == 0) continue;  // loop, done below
        m.comp_of_circle[k] = m.fs.comp_of_crossing[c.xing[0]];
        for (int a : c.arcs) {
            const Ends& w = ends[a];
            int left = m.region_of_face[m.fs.left_of_dart(w.tx, w.ts)];
            int right = m.region_of_face[m.fs.left_of_dart(w.hx, w.hs)];
            if (m.left_region[k] == -1) {
                m.left_region[k] = left;
                m.right_region[k] = right;
            } else if (m.left_region[k] != left || m.right_region[k] != right) {
                throw internal_error("circle sides vary along circle " +
                                     std::to_string(k));
            }
        }
    }
    for (size_t l = 0; l < d.loops.size(); ++l) {
        int k = m.loop_circle[l];
        m.left_region[k] = m.region_of_face[m.fs.loop_faces[l][0]];
        m.right_region[k] = m.region_of_face[m.fs.loop_faces[l][1]];
        m.comp_of_circle[k] = m.fs.comp_of_loop[l];
    }

    // the corner layout around each smoothed crossing, checked against the
    // derived circle sides: the corridor corner pair and the two cut-off
    // turn corners must land in the right regions
    m.band_region.assign(n, -1);
    for (int x = 0; x < n; ++x) {
        auto reg = [&](int t) { return m.region_of_face[m.fs.corner(x, t)]; };
        int cu = m.inc[x].cu, co = m.inc[x].co;
        bool pos = d.xs[x].sign() > 0;
        int B = reg(pos ? 0 : 1);
        m.band_region[x] = B;
        bool ok;
        if (pos)
            ok = reg(2) == B && m.left_region[cu] == B &&
                 m.right_region[co] == B && m.right_region[cu] == reg(3) &&
                 m.left_region[co] == reg(1);
        else
            ok = reg(3) == B && m.right_region[cu] == B &&
                 m.left_region[co] == B && m.left_region[cu] == reg(0) &&
                 m.right_region[co] == reg(2);
        if (!ok)
            throw internal_error("corner layout mismatch at crossing " +
                                 std::to_string(x));
    }

    // region tree per component, rooted at the lowest region id
    m.region_degree.assign(m.region_count, 0);
    for (int k = 0; k < nc; ++k) {
        ++m.region_degree[m.left_region[k]];
        ++m.region_degree[m.right_region[k]];
    }
    m.region_parent.assign(m.region_count, -1);
    m.region_parent_circle.assign(m.region_count, -1);
    m.inner_region.assign(nc, -1);
    m.outer_region.assign(m.fs.components, -1);
    for (int r = 0; r < m.region_count; ++r)
        if (m.outer_region[m.comp_of_region[r]] == -1)
            m.outer_region[m.comp_of_region[r]] = r;
    for (int c = 0; c < m.fs.components; ++c) build_tree(m, c);
    return m;
}

void reroot(SmoothedMap& m, int region) {
    if (region < 0 || region >= m.region_count)
        throw precondition_error("no such region");
    int comp = m.comp_of_region[region];
    m.outer_region[comp] = region;
    build_tree(m, comp);
}

SmoothedMap move_infinity(const SmoothedMap& m) {
    SmoothedMap out = m;
    std::vector<int> circles_in(m.fs.components, 0);
    for (int c : m.comp_of_circle) ++circles_in[c];
    for (int comp = 0; comp < m.fs.components; ++comp) {
        if (circles_in[comp] < 2) continue;
        if (out.region_degree[out.outer_region[comp]] >= 2) continue;
        for (int r = 0; r < out.region_count; ++r)
            if (out.comp_of_region[r] == comp && out.region_degree[r] >= 2) {
                reroot(out, r);
                break;
            }
    }
    return out;
}

bool interior_empty(const SmoothedMap& m, int k) {
    return m.region_degree[m.inner_region[k]] == 1;
}

bool exterior_empty(const SmoothedMap& m, int k) {
    int inner = m.inner_region[k];
    int outer = m.left_region[k] == inner ? m.right_region[k] : m.left_region[k];
    return m.region_parent[outer] == -1 && m.region_degree[outer] == 1;
}

bool nested(const SmoothedMap& m, int a, int b) {
    if (a == b || m.comp_of_circle[a] != m.comp_of_circle[b]) return false;
    int r = m.inner_region[b];
    while (r != -1) {
        if (r == m.inner_region[a]) return true;
        r = m.region_parent[r];
    }
    return false;
}

NestingForest nesting_forest(const SmoothedMap& m) {
    NestingForest f;
    const int nc = static_cast<int>(m.circles.size());
    f.parent.assign(nc, -1);
    f.depth.assign(nc, 0);
    for (int k = 0; k < nc; ++k) {
        int inner = m.inner_region[k];
        int outer =
            m.left_region[k] == inner ? m.right_region[k] : m.left_region[k];
        f.parent[k] = m.region_parent[outer] == -1
                          ? -1
                          : m.region_parent_circle[outer];
    }
    for (int k = 0; k < nc; ++k) {
        int p = f.parent[k], dep = 0;
        while (p != -1) {
            ++dep;
            p = f.parent[p];
        }
        f.depth[k] = dep;
    }
    return f;
}

SeifertGraph seifert_graph(const SmoothedMap& m) {
    SeifertGraph sg;
    const int nc = static_cast<int>(m.circles.size());
    sg.g.nv = nc;
    sg.g.rot.resize(nc);
    for (int x = 0; x < m.d.n(); ++x) {
        sg.g.edges.push_back(
            {m.inc[x].cu, m.inc[x].co, m.d.xs[x].sign(), x});
        sg.end_interior.push_back(
            {static_cast<std::uint8_t>(m.band_region[x] ==
                                       m.inner_region[m.inc[x].cu]),
             static_cast<std::uint8_t>(m.band_region[x] ==
                                       m.inner_region[m.inc[x].co])});
    }
    for (int k = 0; k < nc; ++k) {
        const Circle& c = m.circles[k];
        std::vector<int> list;
        for (int i = 0; i < c.transitions(); ++i)
            list.push_back(2 * c.xing[i] + (c.as_under[i] ? 0 : 1));
        if (m.ccw(k)) std::reverse(list.begin(), list.end());
        sg.g.rot[k] = std::move(list);
    }
    try {
        bipartition(sg.g);
    } catch (const reduction_invariant_error&) {
        throw internal_error("Seifert graph failed to be bipartite");
    }
    sg.plane = true;
    for (int k = 0; k < nc; ++k)
        if (!interior_empty(m, k)) sg.plane = false;
    if (sg.plane) validate_graph(sg.g);
    return sg;
}

int link_components(const Diagram& d) {
    auto tab = arc_table(d);
    std::map<int, int> comp;
    int count = 0;
    for (const auto& [start, e] : tab) {
        if (comp.count(start)) continue;
        int a = start;
        do {
            comp[a] = count;
            const ArcEnds& ae = tab[a];
            int hx = -1, hs = -1;
            for (auto [x, s] : ae.at)
                if (d.xs[x].in(s)) {
                    hx = x;
                    hs = s;
                }
            a = d.xs[hx].s[(hs + 2) % 4];
        } while (a != start);
        ++count;
    }
    return count + static_cast<int>(d.loops.size());
}

SurfaceInvariants surface_invariants(const Diagram& d) {
    SmoothedMap m = seifert_circles(d);
    SurfaceInvariants s;
    int circles = static_cast<int>(m.circles.size());
    int crossings = d.n();
    s.split_parts = circles == 0 ? 0 : m.fs.components;
    s.euler = circles - crossings;
    s.betti = crossings - circles + s.split_parts;
    s.boundary = link_components(d);
    s.genus_twice = 2 * s.split_parts - s.boundary - s.euler;
    if (s.betti < 0 || s.genus_twice < 0)
        throw internal_error("impossible surface invariants");
    return s;
}

}  // namespace sqp
