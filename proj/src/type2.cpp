#include "sqp/type2.hpp"

#include <algorithm>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "sqp/certify.hpp"

namespace sqp {

namespace {

// Corner t of a crossing spans slots t and t+1.  The two corners whose arcs
// lie on different circles are the band "mouths": after the oriented
// smoothing they are the faces the band channel opens into (for a kept
// crossing, the quadrants between the two strands).  The other two corners
// flank the band and keep the strand running along a single circle.
int in_in_corner(const Crossing& x) { return x.over_in == 1 ? 0 : 3; }
int out_out_corner(const Crossing& x) { return x.over_in == 1 ? 2 : 1; }
bool is_mouth(const Crossing& x, int t) {
    return t == in_in_corner(x) || t == out_out_corner(x);
}

// corner sitting at the departing crossing of a dart
int corner_of_dart(int dart) { return (dart + 3) & 3; }

struct ArcEnd {
    int x = -1, s = -1;
};
struct BothEnds {
    ArcEnd head, tail;
};

std::map<int, BothEnds> arc_ends(const Diagram& d) {
    std::map<int, BothEnds> out;
    for (const auto& [lab, e] : arc_table(d)) {
        BothEnds w;
        for (auto [x, s] : e.at) {
            if (d.xs[x].in(s))
                w.head = {x, s};
            else
                w.tail = {x, s};
        }
        if (w.head.x < 0 || w.tail.x < 0)
            throw internal_error("arc without a head or tail end");
        out[lab] = w;
    }
    return out;
}

// A circle as a cyclic list of transitions: entry (x, 1) means the circle
// carries the under-in/over-out pair of crossing x, entry (x, 0) the
// over-in/under-out pair.  An empty path is a bare loop.  Rebuilding from
// such plans assigns fresh arc labels; crossing ids and over_in are kept.
struct StrandPlan {
    std::vector<std::pair<int, std::uint8_t>> path;
};

std::vector<StrandPlan> circle_plans(const SmoothedMap& m) {
    std::vector<StrandPlan> out;
    for (const auto& c : m.circles) {
        StrandPlan p;
        for (int i = 0; i < c.transitions(); ++i)
            p.path.push_back({c.xing[i], c.as_under[i]});
        out.push_back(std::move(p));
    }
    return out;
}

Diagram rebuild_plans(const std::vector<StrandPlan>& strands,
                      const std::vector<int>& over_in_of) {
    Diagram d;
    d.xs.assign(over_in_of.size(), Crossing{});
    for (size_t x = 0; x < over_in_of.size(); ++x)
        d.xs[x].over_in = over_in_of[x];
    int next = 1;
    for (const auto& st : strands) {
        int len = static_cast<int>(st.path.size());
        if (len == 0) {
            d.loops.push_back(next++);
            continue;
        }
        std::vector<int> lab(len);
        for (int i = 0; i < len; ++i) lab[i] = next++;
        for (int i = 0; i < len; ++i) {
            auto [x, au] = st.path[i];
            if (x < 0 || x >= static_cast<int>(over_in_of.size()))
                throw internal_error("strand plan references a missing crossing");
            int in = lab[i], out = lab[(i + 1) % len];
            int o = over_in_of[x];
            if (au) {
                d.xs[x].s[0] = in;
                d.xs[x].s[4 - o] = out;
            } else {
                d.xs[x].s[o] = in;
                d.xs[x].s[2] = out;
            }
        }
    }
    for (const auto& x : d.xs)
        for (int s = 0; s < 4; ++s)
            if (x.s[s] == 0)
                throw internal_error("strand plans left a slot unwritten");
    validate(d);
    return d;
}

std::string hash_hex(std::uint64_t h) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

long long measure_of(const GeneralizedSmoothing& gs) {
    return static_cast<long long>(gs.m.circles.size()) + gs.base.n();
}

}  // namespace

const char* region_name(GenRegion r) {
    switch (r) {
        case GenRegion::U1: return "U1";
        case GenRegion::U2: return "U2";
        case GenRegion::O1: return "O1";
        case GenRegion::O2: return "O2";
    }
    return "?";
}

const char* move_name(Type2Move::Kind k) {
    switch (k) {
        case Type2Move::Kind::Split: return "split-components";
        case Type2Move::Kind::Untwist: return "untwist-nugatory";
        case Type2Move::Kind::Murasugi: return "murasugi-split";
        case Type2Move::Kind::DropBand: return "drop-adjacent-band";
        case Type2Move::Kind::AddBand: return "add-coherent-band";
    }
    return "?";
}

int GeneralizedSmoothing::gen_under(int x) const {
    return gen_of_arc.at(base.xs[x].s[0]);
}

int GeneralizedSmoothing::gen_over(int x) const {
    return gen_of_arc.at(base.xs[x].s[base.xs[x].over_in]);
}

GeneralizedSmoothing build_generalized(const Diagram& d, int c_minus, int c_plus) {
    auto cls = classify(d);
    if (cls.kind != DiagramKind::AlmostPositiveTypeII)
        throw precondition_error(std::string("partial smoothing needs an ") +
                                 kind_name(DiagramKind::AlmostPositiveTypeII) +
                                 " diagram, got " + kind_name(cls.kind));
    if (c_minus != cls.negative_crossing)
        throw precondition_error("marked crossing is not the negative one");
    if (c_plus < 0 || c_plus >= d.n() || c_plus == c_minus)
        throw precondition_error("no such partner crossing");

    GeneralizedSmoothing gs;
    gs.base = d;
    gs.c_minus = c_minus;
    gs.c_plus = c_plus;
    gs.m = seifert_circles(d);
    SmoothedMap& m = gs.m;

    gs.k_under = m.inc[c_minus].cu;
    gs.k_over = m.inc[c_minus].co;
    if (std::minmax(m.inc[c_plus].cu, m.inc[c_plus].co) !=
        std::minmax(gs.k_under, gs.k_over))
        throw precondition_error(
            "partner crossing does not join the same pair of circles");
    // at the positive partner the two circles trade the under approach
    if (m.inc[c_plus].cu != gs.k_over)
        throw internal_error("under side fails to alternate at the kept pair");

    // trace the two curves: resolve everywhere except at the kept pair
    auto ends = arc_ends(d);
    auto trace = [&](int start) {
        std::vector<int> cyc;
        int a = start;
        do {
            cyc.push_back(a);
            if (cyc.size() > ends.size())
                throw internal_error("curve trace failed to close");
            auto [x, s] = ends.at(a).head;
            int out;
            if (x == c_minus || x == c_plus)
                out = (s + 2) & 3;  // keep the crossing: pass straight through
            else if (s == 0)
                out = 4 - d.xs[x].over_in;
            else if (s == d.xs[x].over_in)
                out = 2;
            else
                throw internal_error("curve trace entered through an out slot");
            a = d.xs[x].s[out];
        } while (a != start);
        return cyc;
    };
    int o_m = d.xs[c_minus].over_in;
    gs.s1_arcs = trace(d.xs[c_minus].s[o_m]);
    std::set<int> in_s1(gs.s1_arcs.begin(), gs.s1_arcs.end());
    if (in_s1.count(d.xs[c_minus].s[0]))
        throw internal_error("partial smoothing traced a single curve");
    gs.s2_arcs = trace(d.xs[c_minus].s[0]);
    std::set<int> in_s2(gs.s2_arcs.begin(), gs.s2_arcs.end());
    for (int a : gs.s1_arcs)
        if (in_s2.count(a)) throw internal_error("the two curves share an arc");
    if (!in_s1.count(d.xs[c_plus].s[d.xs[c_plus].over_in]))
        throw internal_error(
            "the curve over at one kept crossing goes under at the other");
    {
        std::set<int> special;
        for (int k : {gs.k_under, gs.k_over})
            for (int a : m.circles[k].arcs) special.insert(a);
        std::set<int> both = in_s1;
        both.insert(in_s2.begin(), in_s2.end());
        if (both != special)
            throw internal_error("partial smoothing strayed off the special circles");
    }

    for (size_t k = 0; k < m.circles.size(); ++k)
        for (int a : m.circles[k].arcs) gs.gen_of_arc[a] = static_cast<int>(k);
    for (int a : gs.s1_arcs) gs.gen_of_arc[a] = gs.s1_id();
    for (int a : gs.s2_arcs) gs.gen_of_arc[a] = gs.s2_id();

    // the region shared by the two kept bands, and the far sides of the two
    // special circles: those are the consistently oriented regions
    gs.band_home = m.band_region[c_minus];
    if (m.band_region[c_plus] != gs.band_home)
        throw internal_error("kept bands do not share a region");
    auto far_side = [&](int k) {
        bool lb = m.left_region[k] == gs.band_home;
        bool rb = m.right_region[k] == gs.band_home;
        if (lb == rb)
            throw internal_error("special circle does not bound the shared region");
        return lb ? m.right_region[k] : m.left_region[k];
    };
    gs.region_o2 = far_side(gs.k_under);  // the side enclosed by s2 only
    gs.region_o1 = far_side(gs.k_over);   // the side enclosed by s1 only
    if (gs.region_o1 == gs.region_o2)
        throw internal_error("oriented side regions are not distinct");

    const FaceSet& fs = m.fs;
    // the shared region falls into two pieces once the kept crossings stay:
    // join faces only through the resolved band channels
    UnionFind pieces(fs.count());
    for (int x = 0; x < d.n(); ++x) {
        if (x == c_minus || x == c_plus) continue;
        pieces.unite(fs.corner(x, in_in_corner(d.xs[x])),
                     fs.corner(x, out_out_corner(d.xs[x])));
    }
    int f_ii_m = fs.corner(c_minus, in_in_corner(d.xs[c_minus]));
    int f_oo_m = fs.corner(c_minus, out_out_corner(d.xs[c_minus]));
    int root_u1 = pieces.find(f_ii_m);
    int root_u2 = pieces.find(f_oo_m);
    if (root_u1 == root_u2)
        throw internal_error("shared region does not split at the kept crossings");
    for (int f = 0; f < fs.count(); ++f) {
        if (m.region_of_face[f] != gs.band_home) continue;
        int r = pieces.find(f);
        if (r != root_u1 && r != root_u2)
            throw internal_error("shared region falls into more than two pieces");
    }
    if (pieces.find(fs.corner(c_plus, in_in_corner(d.xs[c_plus]))) != root_u2 ||
        pieces.find(fs.corner(c_plus, out_out_corner(d.xs[c_plus]))) != root_u1)
        throw internal_error("kept quadrants fail to interleave");

    reroot(m, gs.band_home);

    // the piece of the shared region a circle with its far side rooted there
    // touches; every face along its outer rim lies in one piece
    auto piece_of_circle = [&](int q) {
        const Circle& c = m.circles[q];
        if (c.transitions() == 0)
            throw internal_error("bare loop rooted in the shared region");
        const BothEnds& w = ends.at(c.arcs[0]);
        int face = m.left_region[q] == gs.band_home
                       ? fs.left_of_dart(w.tail.x, w.tail.s)
                       : fs.left_of_dart(w.head.x, w.head.s);
        if (m.region_of_face[face] != gs.band_home)
            throw internal_error("circle rim face left the shared region");
        return pieces.find(face) == root_u1 ? GenRegion::U1 : GenRegion::U2;
    };

    std::map<int, GenRegion> region_memo;
    std::function<GenRegion(int)> label_region = [&](int r) -> GenRegion {
        auto it = region_memo.find(r);
        if (it != region_memo.end()) return it->second;
        GenRegion g;
        if (r == gs.region_o1)
            g = GenRegion::O1;
        else if (r == gs.region_o2)
            g = GenRegion::O2;
        else if (r == gs.band_home)
            throw internal_error("shared region queried without a piece");
        else {
            int p = m.region_parent[r];
            if (p == -1)
                g = GenRegion::U1;  // split parts sit beside the curves
            else if (p == gs.band_home)
                g = piece_of_circle(m.region_parent_circle[r]);
            else
                g = label_region(p);
        }
        region_memo[r] = g;
        return g;
    };

    gs.region_of_face.assign(fs.count(), GenRegion::U1);
    for (int f = 0; f < fs.count(); ++f) {
        int r = m.region_of_face[f];
        gs.region_of_face[f] = r == gs.band_home
                                   ? (pieces.find(f) == root_u1 ? GenRegion::U1
                                                                : GenRegion::U2)
                                   : label_region(r);
    }

    gs.region_of_circle.assign(m.circles.size(), GenRegion::U1);
    for (size_t k = 0; k < m.circles.size(); ++k) {
        if (!gs.plain(static_cast<int>(k))) continue;
        int r_in = m.inner_region[k];
        int r_out = m.left_region[k] == r_in ? m.right_region[k] : m.left_region[k];
        gs.region_of_circle[k] = r_out == gs.band_home
                                     ? piece_of_circle(static_cast<int>(k))
                                     : label_region(r_out);
    }

    gs.region_of_crossing.assign(d.n(), GenRegion::U1);
    for (int x = 0; x < d.n(); ++x) {
        if (x == c_minus || x == c_plus) continue;
        int r = m.band_region[x];
        gs.region_of_crossing[x] =
            r == gs.band_home
                ? (pieces.find(fs.corner(x, in_in_corner(d.xs[x]))) == root_u1
                       ? GenRegion::U1
                       : GenRegion::U2)
                : label_region(r);
    }

    // the normalized drawing: s1 keeps its outside on the left (clockwise),
    // s2 its inside (counterclockwise)
    if (gs.region_of_face[fs.left_of_dart(c_minus, (o_m + 2) & 3)] != GenRegion::O2 ||
        gs.region_of_face[fs.left_of_dart(c_minus, 2)] != GenRegion::U2)
        throw internal_error("curve orientations failed to normalize");
    gs.orientation_normalized = true;
    return gs;
}

GeneralizedSmoothing build_generalized(const Diagram& d) {
    auto cls = classify(d);
    if (cls.kind != DiagramKind::AlmostPositiveTypeII)
        throw precondition_error(std::string("partial smoothing needs an ") +
                                 kind_name(DiagramKind::AlmostPositiveTypeII) +
                                 " diagram, got " + kind_name(cls.kind));
    return build_generalized(d, cls.negative_crossing, cls.parallel_positive);
}

SurfaceInvariants sigma_prime_invariants(const GeneralizedSmoothing& gs) {
    const Diagram& d = gs.base;
    SurfaceInvariants si;
    // one disk per generalized circle (the two special circles are replaced
    // by the two curves), one ribbon per resolved crossing
    si.euler = static_cast<int>(gs.m.circles.size()) - (d.n() - 2);
    UnionFind uf(gs.s2_id() + 1);
    for (int x = 0; x < d.n(); ++x) {
        if (x == gs.c_minus || x == gs.c_plus) continue;
        uf.unite(gs.gen_under(x), gs.gen_over(x));
    }
    std::set<int> roots;
    for (size_t k = 0; k < gs.m.circles.size(); ++k)
        if (gs.plain(static_cast<int>(k))) roots.insert(uf.find(static_cast<int>(k)));
    roots.insert(uf.find(gs.s1_id()));
    roots.insert(uf.find(gs.s2_id()));
    si.split_parts = static_cast<int>(roots.size());
    si.boundary = link_components(d);
    si.betti = si.split_parts - si.euler;
    si.genus_twice = 2 * si.split_parts - si.euler - si.boundary;

    auto base_si = surface_invariants(d);
    if (si.euler != base_si.euler + 2)
        throw internal_error("generalized surface has the wrong euler characteristic");
    if (si.boundary != base_si.boundary)
        throw internal_error("generalized surface boundary count drifted");
    return si;
}

namespace {

// Empty disk between a resolved crossing and a kept one: a two-dart face
// cornered by one band mouth of c and one quadrant of the kept crossing.
// Any further transition on either rim arc would sit inside the disk the
// slide sweeps, so exact dart counts are the whole test.
int find_swap_disk(const GeneralizedSmoothing& gs, int c, int over) {
    const FaceSet& fs = gs.m.fs;
    const Diagram& d = gs.base;
    for (int f = 0; f < fs.count(); ++f) {
        if (fs.faces[f].size() != 2) continue;
        bool c_ok = false, over_ok = false;
        for (int dart : fs.faces[f]) {
            int x = dart / 4, t = corner_of_dart(dart);
            if (x == c && is_mouth(d.xs[x], t))
                c_ok = true;
            else if (x == over && is_mouth(d.xs[x], t))
                over_ok = true;
        }
        if (c_ok && over_ok) return f;
    }
    return -1;
}

void check_kept(const GeneralizedSmoothing& gs, int over) {
    if (over != gs.c_minus && over != gs.c_plus)
        throw precondition_error("slides go across one of the kept crossings");
}

bool joins_both_curves(const GeneralizedSmoothing& gs, int x) {
    return std::minmax(gs.gen_under(x), gs.gen_over(x)) ==
           std::minmax(gs.s1_id(), gs.s2_id());
}

}  // namespace

GeneralizedSmoothing swap_crossing(const GeneralizedSmoothing& gs, int c, int over) {
    const Diagram& d = gs.base;
    check_kept(gs, over);
    if (c < 0 || c >= d.n() || c == gs.c_minus || c == gs.c_plus)
        throw precondition_error("no such resolved crossing");
    if (!joins_both_curves(gs, c))
        throw precondition_error("crossing must join the two curves");
    if (find_swap_disk(gs, c, over) < 0)
        throw precondition_error("no empty disk between the crossing and the kept one");

    auto plans = circle_plans(gs.m);
    for (int k : {gs.k_under, gs.k_over}) {
        auto& path = plans[k].path;
        int len = static_cast<int>(path.size());
        int ic = -1, io = -1;
        for (int i = 0; i < len; ++i) {
            if (path[i].first == c) ic = i;
            if (path[i].first == over) io = i;
        }
        if (ic < 0 || io < 0) throw internal_error("slide lost a transition");
        bool c_before = (ic + 1) % len == io;
        bool c_after = (io + 1) % len == ic;
        if (!c_before && !c_after)
            throw internal_error("slide disk without strand adjacency");
        auto entry = path[ic];
        path.erase(path.begin() + ic);
        int jo = io - (io > ic ? 1 : 0);
        if (c_before)
            path.insert(path.begin() + jo + 1, entry);
        else
            path.insert(path.begin() + jo, entry);
    }
    std::vector<int> oin(d.n());
    for (int x = 0; x < d.n(); ++x) oin[x] = d.xs[x].over_in;
    Diagram d2 = rebuild_plans(plans, oin);
    for (int x = 0; x < d.n(); ++x)
        if (d2.xs[x].sign() != d.xs[x].sign())
            throw internal_error("slide changed a crossing sign");
    GeneralizedSmoothing out = build_generalized(d2, gs.c_minus, gs.c_plus);
    if (!(sigma_prime_invariants(out) == sigma_prime_invariants(gs)))
        throw internal_error("slide changed the surface");
    if (out.region_of_crossing[c] == gs.region_of_crossing[c])
        throw internal_error("slide failed to carry the crossing across");
    return out;
}

namespace {

// Shifts crossing ids after removals (ascending list) with new ones
// appended at the end; placeholder ids n, n+1, ... name the appended ones.
struct IdShift {
    std::vector<int> removed;  // ascending
    int old_n = 0;

    int operator()(int x) const {
        if (x >= old_n)  // placeholder for an appended crossing
            return old_n - static_cast<int>(removed.size()) + (x - old_n);
        int drop = 0;
        for (int r : removed) {
            if (r == x) throw internal_error("removed crossing still referenced");
            if (r < x) ++drop;
        }
        return x - drop;
    }
};

void translate_plans(std::vector<StrandPlan>& plans, const IdShift& shift) {
    for (auto& p : plans)
        for (auto& e : p.path) e.first = shift(e.first);
}

int find_entry(const StrandPlan& p, int crossing) {
    for (size_t i = 0; i < p.path.size(); ++i)
        if (p.path[i].first == crossing) return static_cast<int>(i);
    throw internal_error("transition missing from its circle");
}

void remove_entry(StrandPlan& p, int crossing) {
    p.path.erase(p.path.begin() + find_entry(p, crossing));
}

}  // namespace

GeneralizedSmoothing swap_circle(const GeneralizedSmoothing& gs, int circle, int over) {
    const Diagram& d = gs.base;
    const SmoothedMap& m = gs.m;
    check_kept(gs, over);
    if (circle < 0 || circle >= static_cast<int>(m.circles.size()) ||
        !gs.plain(circle) || m.circles[circle].transitions() == 0)
        throw precondition_error("no such plain circle");
    GenRegion side = gs.region_of_circle[circle];
    if (side != GenRegion::O1 && side != GenRegion::O2)
        throw precondition_error("circle must sit in an oriented side region");
    if (m.circles[circle].transitions() != 2)
        throw precondition_error("circle must carry exactly two crossings");
    int x1 = m.circles[circle].xing[0];
    int x2 = m.circles[circle].xing[1];
    if (x1 == x2)
        throw precondition_error("both bands of the circle meet one crossing");
    auto other_end = [&](int x) {
        return m.inc[x].cu == circle ? m.inc[x].co : m.inc[x].cu;
    };
    int a1 = other_end(x1), a2 = other_end(x2);
    if (a1 != a2 || (a1 != gs.k_under && a1 != gs.k_over))
        throw precondition_error("circle must attach to the curves");

    // pocket: a three-dart face cornered by the two band mouths and the
    // kept crossing's quadrant on the circle's side
    const FaceSet& fs = m.fs;
    int pocket = -1;
    for (int f = 0; f < fs.count() && pocket < 0; ++f) {
        if (fs.faces[f].size() != 3) continue;
        bool m1 = false, m2 = false, flank = false;
        for (int dart : fs.faces[f]) {
            int x = dart / 4, t = corner_of_dart(dart);
            if (x == x1 && is_mouth(d.xs[x], t))
                m1 = true;
            else if (x == x2 && is_mouth(d.xs[x], t))
                m2 = true;
            else if (x == over && !is_mouth(d.xs[x], t))
                flank = true;
        }
        if (m1 && m2 && flank) pocket = f;
    }
    if (pocket < 0)
        throw precondition_error("no empty pocket between the circle and the kept crossing");

    auto base_plans = circle_plans(m);
    std::vector<StrandPlan> plans;
    for (int k = 0; k < static_cast<int>(base_plans.size()); ++k)
        if (k != circle) plans.push_back(base_plans[k]);
    int cu_over = m.inc[over].cu, co_over = m.inc[over].co;
    auto plan_index = [&](int k) { return k - (k > circle ? 1 : 0); };
    for (auto& p : plans) {
        // drop the two feet wherever they sit
        for (int x : {x1, x2}) {
            bool has = false;
            for (const auto& e : p.path) has = has || e.first == x;
            if (has) remove_entry(p, x);
        }
    }
    int y = d.n();  // placeholder id for the new crossing
    IdShift shift{{std::min(x1, x2), std::max(x1, x2)}, d.n()};
    std::vector<int> oin;
    for (int x = 0; x < d.n(); ++x)
        if (x != x1 && x != x2) oin.push_back(d.xs[x].over_in);
    oin.push_back(1);  // the contracted crossing is positive
    int cm2 = shift(gs.c_minus), cp2 = shift(gs.c_plus);

    GeneralizedSmoothing out;
    bool done = false;
    for (int under_on_cu : {1, 0}) {
        auto attempt = plans;
        // the new crossing sits just before the kept one on both strands:
        // the in-in side
        auto& pcu = attempt[plan_index(cu_over)];
        pcu.path.insert(pcu.path.begin() + find_entry(pcu, over),
                        {y, static_cast<std::uint8_t>(under_on_cu)});
        auto& pco = attempt[plan_index(co_over)];
        pco.path.insert(pco.path.begin() + find_entry(pco, over),
                        {y, static_cast<std::uint8_t>(1 - under_on_cu)});
        translate_plans(attempt, shift);
        try {
            Diagram d2 = rebuild_plans(attempt, oin);
            out = build_generalized(d2, cm2, cp2);
            done = true;
        } catch (const error&) {
            continue;
        }
        break;
    }
    if (!done)
        throw internal_error("no planar completion for the contracted circle");
    if (!(sigma_prime_invariants(out) == sigma_prime_invariants(gs)))
        throw internal_error("contracting the circle changed the surface");
    GenRegion landing = over == gs.c_plus ? GenRegion::U2 : GenRegion::U1;
    if (out.region_of_crossing[shift(y)] != landing)
        throw internal_error("contracted crossing landed in the wrong region");
    return out;
}

GeneralizedSmoothing swap_circle_back(const GeneralizedSmoothing& gs, int crossing,
                                      int over, GenRegion side) {
    const Diagram& d = gs.base;
    const SmoothedMap& m = gs.m;
    check_kept(gs, over);
    if (side != GenRegion::O1 && side != GenRegion::O2)
        throw precondition_error("circles can only be restored on an oriented side");
    if (crossing < 0 || crossing >= d.n() || crossing == gs.c_minus ||
        crossing == gs.c_plus)
        throw precondition_error("no such resolved crossing");
    if (!joins_both_curves(gs, crossing))
        throw precondition_error("crossing must join the two curves");
    if (find_swap_disk(gs, crossing, over) < 0)
        throw precondition_error("no empty disk between the crossing and the kept one");

    int rim = side == GenRegion::O1 ? gs.k_over : gs.k_under;
    auto base_plans = circle_plans(m);
    for (int k : {m.inc[crossing].cu, m.inc[crossing].co})
        remove_entry(base_plans[k], crossing);
    int f1 = d.n(), f2 = d.n() + 1;  // placeholder ids for the two feet
    IdShift shift{{crossing}, d.n()};
    std::vector<int> oin;
    for (int x = 0; x < d.n(); ++x)
        if (x != crossing) oin.push_back(d.xs[x].over_in);
    oin.push_back(1);
    oin.push_back(1);
    int cm2 = shift(gs.c_minus), cp2 = shift(gs.c_plus);

    for (int au1 : {1, 0})
        for (int au2 : {1, 0})
            for (int flipped : {0, 1}) {
                auto attempt = base_plans;
                auto& rp = attempt[rim];
                int io = find_entry(rp, over);
                // the feet hug the kept crossing, one on each side
                rp.path.insert(rp.path.begin() + io,
                               {f1, static_cast<std::uint8_t>(au1)});
                rp.path.insert(rp.path.begin() + io + 2,
                               {f2, static_cast<std::uint8_t>(au2)});
                StrandPlan q;
                q.path = {{f1, static_cast<std::uint8_t>(1 - au1)},
                          {f2, static_cast<std::uint8_t>(1 - au2)}};
                if (flipped) std::swap(q.path[0], q.path[1]);
                attempt.push_back(q);
                translate_plans(attempt, shift);
                GeneralizedSmoothing out;
                try {
                    Diagram d2 = rebuild_plans(attempt, oin);
                    out = build_generalized(d2, cm2, cp2);
                } catch (const error&) {
                    continue;
                }
                if (!(sigma_prime_invariants(out) == sigma_prime_invariants(gs)))
                    continue;
                // the restored circle carries exactly the two new feet
                int nf1 = shift(f1);
                int qc = out.m.circles[out.m.inc[nf1].cu].transitions() == 2 &&
                                 out.m.inc[nf1].cu != out.k_under &&
                                 out.m.inc[nf1].cu != out.k_over
                             ? out.m.inc[nf1].cu
                             : out.m.inc[nf1].co;
                if (!out.plain(qc) || out.m.circles[qc].transitions() != 2)
                    continue;
                if (out.region_of_circle[qc] != side) continue;
                return out;
            }
    throw internal_error("no planar completion for the restored circle");
}

namespace {

bool direct_next_to(const GeneralizedSmoothing& gs, int c1, int c2) {
    std::pair<int, int> p1 = std::minmax(gs.gen_under(c1), gs.gen_over(c1));
    std::pair<int, int> p2 = std::minmax(gs.gen_under(c2), gs.gen_over(c2));
    if (p1 != p2 || p1.first == p1.second) return false;
    const FaceSet& fs = gs.m.fs;
    const Diagram& d = gs.base;
    for (int f = 0; f < fs.count(); ++f) {
        if (fs.faces[f].empty()) continue;
        int m1 = 0, m2 = 0;
        bool bad = false;
        for (int dart : fs.faces[f]) {
            int x = dart / 4, t = corner_of_dart(dart);
            if (x == gs.c_minus || x == gs.c_plus) {
                bad = true;  // the witness intervals may not touch the kept pair
                break;
            }
            if (!is_mouth(d.xs[x], t)) continue;  // far-side attachments pass
            if (x == c1)
                ++m1;
            else if (x == c2)
                ++m2;
            else {
                bad = true;  // some other band opens into this face
                break;
            }
        }
        if (!bad && m1 == 1 && m2 == 1) return true;
    }
    return false;
}

}  // namespace

bool next_to_each_other(const GeneralizedSmoothing& gs, int c1, int c2) {
    const Diagram& d = gs.base;
    for (int c : {c1, c2})
        if (c < 0 || c >= d.n() || c == gs.c_minus || c == gs.c_plus)
            throw precondition_error("adjacency is asked of resolved crossings");
    if (c1 == c2) throw precondition_error("adjacency needs two crossings");
    if (direct_next_to(gs, c1, c2)) return true;
    for (int c : {c1, c2})
        for (int over : {gs.c_minus, gs.c_plus}) {
            try {
                GeneralizedSmoothing slid = swap_crossing(gs, c, over);
                if (direct_next_to(slid, c1, c2)) return true;
            } catch (const precondition_error&) {
                // that slide is not available; adjacency may hold another way
            }
        }
    return false;
}

namespace {

// Removes one crossing and reconnects the four strand ends.  The default
// pairing joins the ends the way the oriented smoothing would, which detaches
// the band while keeping both circles intact (used when a parallel twin band
// remains); the strand-sense pairing lets the two strands pass straight
// through, which fuses the circles and preserves the underlying link (used
// for untwisting a bridge band).  Arc classes that lose every occurrence
// either become bare loops or are absorbed by the surviving strand.
Diagram erase_crossing(const Diagram& d, int x0, bool keep_all_loops,
                       bool strand_sense = false) {
    const Crossing& X = d.xs[x0];
    int o = X.over_in;
    std::map<int, int> up;
    std::function<int(int)> find = [&](int a) -> int {
        auto it = up.find(a);
        if (it == up.end() || it->second == a) return a;
        int r = find(it->second);
        it->second = r;
        return r;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        up[b] = a;
    };
    if (strand_sense) {
        unite(X.s[0], X.s[2]);
        unite(X.s[o], X.s[(o + 2) & 3]);
    } else {
        unite(X.s[0], X.s[(o + 2) & 3]);
        unite(X.s[o], X.s[2]);
    }

    Diagram out;
    out.loops = d.loops;
    std::set<int> used;
    for (int x = 0; x < d.n(); ++x) {
        if (x == x0) continue;
        Crossing c2 = d.xs[x];
        for (int s = 0; s < 4; ++s) {
            c2.s[s] = find(c2.s[s]);
            used.insert(c2.s[s]);
        }
        out.xs.push_back(c2);
    }
    std::set<int> reps{find(X.s[0]), find(X.s[o])};
    for (int r : reps) {
        if (used.count(r)) continue;
        if (keep_all_loops || r == find(X.s[0])) out.loops.push_back(r);
    }
    std::sort(out.loops.begin(), out.loops.end());
    validate(out);
    return out;
}

struct Reduction {
    GeneralizedSmoothing gs;
    Type2Trace trace;
    WorkBudget budget;
};

void push_move(Reduction& red, Type2Move mv) {
    mv.pre_hash = fnv1a64(serialize_pd(red.gs.base));
    red.trace.moves.push_back(std::move(mv));
}

void advance(Reduction& red, const Diagram& next, int cm, int cp,
             long long old_measure) {
    GeneralizedSmoothing out = build_generalized(next, cm, cp);
    if (measure_of(out) >= old_measure)
        throw internal_error("reduction move failed to shrink the diagram");
    red.gs = std::move(out);
}

bool try_split(Reduction& red) {
    const GeneralizedSmoothing& gs = red.gs;
    if (gs.m.fs.components <= 1) return false;
    auto par = sigma_prime_invariants(gs);
    long long before = measure_of(gs);
    auto pieces = split_components(gs.base);
    int kept = -1;
    for (size_t i = 0; i < pieces.size(); ++i)
        for (const auto& x : pieces[i].xs)
            if (x.sign() < 0) kept = static_cast<int>(i);
    if (kept < 0) throw internal_error("split lost the negative crossing");
    int comp = gs.m.fs.comp_of_crossing[gs.c_minus];
    if (gs.m.fs.comp_of_crossing[gs.c_plus] != comp)
        throw internal_error("kept pair split across components");
    int cm2 = 0, cp2 = 0;
    for (int x = 0; x < gs.base.n(); ++x) {
        if (gs.m.fs.comp_of_crossing[x] != comp) continue;
        if (x < gs.c_minus) ++cm2;
        if (x < gs.c_plus) ++cp2;
    }
    Type2Move mv;
    mv.kind = Type2Move::Kind::Split;
    mv.a = kept;
    int eul = 0, bnd = 0;
    for (size_t i = 0; i < pieces.size(); ++i) {
        if (static_cast<int>(i) == kept) continue;
        for (const auto& x : pieces[i].xs)
            if (x.sign() < 0)
                throw internal_error("negative crossing in a shed part");
        auto si = surface_invariants(pieces[i]);
        eul += si.euler;
        bnd += si.boundary;
        mv.shed.push_back(serialize_pd(pieces[i]));
    }
    push_move(red, std::move(mv));
    advance(red, pieces[kept], cm2, cp2, before);
    auto now = sigma_prime_invariants(red.gs);
    if (par.euler != now.euler + eul || par.boundary != now.boundary + bnd)
        throw internal_error("splitting changed the surface");
    return true;
}

bool try_untwist(Reduction& red) {
    const GeneralizedSmoothing& gs = red.gs;
    const Diagram& d = gs.base;
    const FaceSet& fs = gs.m.fs;
    for (int x = 0; x < d.n(); ++x) {
        if (x == gs.c_minus || x == gs.c_plus) continue;
        // a nugatory band is a bridge between two distinct circles; a band
        // from a circle to itself with matching corners is a waist and is
        // split off by the plumbing case instead
        if (gs.gen_under(x) == gs.gen_over(x)) continue;
        if (fs.corner(x, in_in_corner(d.xs[x])) !=
            fs.corner(x, out_out_corner(d.xs[x])))
            continue;
        auto par = sigma_prime_invariants(gs);
        long long before = measure_of(gs);
        Type2Move mv;
        mv.kind = Type2Move::Kind::Untwist;
        mv.a = x;
        push_move(red, std::move(mv));
        Diagram next = erase_crossing(d, x, false, true);
        advance(red, next, gs.c_minus - (gs.c_minus > x ? 1 : 0),
                gs.c_plus - (gs.c_plus > x ? 1 : 0), before);
        if (!(sigma_prime_invariants(red.gs) == par))
            throw internal_error("untwisting changed the surface");
        return true;
    }
    return false;
}

bool try_murasugi(Reduction& red) {
    const GeneralizedSmoothing& gs = red.gs;
    const SmoothedMap& m = gs.m;
    for (size_t k = 0; k < m.circles.size(); ++k) {
        if (m.circles[k].transitions() == 0) continue;
        int ki = static_cast<int>(k);
        // only plain circles may be split off; the two curves always have
        // material on both sides
        if (!gs.plain(ki)) continue;
        if (interior_empty(m, ki) || exterior_empty(m, ki)) continue;
        auto par = sigma_prime_invariants(gs);
        long long before = measure_of(gs);
        auto mp = murasugi_split(m, ki);
        bool keep_in =
            std::binary_search(mp.interior_xs.begin(), mp.interior_xs.end(),
                               gs.c_minus);
        const Diagram& kept = keep_in ? mp.interior : mp.exterior;
        const Diagram& shed = keep_in ? mp.exterior : mp.interior;
        const auto& keptxs = keep_in ? mp.interior_xs : mp.exterior_xs;
        if (!std::binary_search(keptxs.begin(), keptxs.end(), gs.c_plus))
            throw internal_error("kept pair split by the circle");
        for (const auto& x : shed.xs)
            if (x.sign() < 0)
                throw internal_error("negative crossing in the shed piece");
        auto rank = [&](int x) {
            return static_cast<int>(std::lower_bound(keptxs.begin(), keptxs.end(),
                                                     x) -
                                    keptxs.begin());
        };
        Type2Move mv;
        mv.kind = Type2Move::Kind::Murasugi;
        mv.a = ki;
        mv.b = keep_in ? 1 : 0;
        mv.shed.push_back(serialize_pd(shed));
        push_move(red, std::move(mv));
        advance(red, kept, rank(gs.c_minus), rank(gs.c_plus), before);
        auto now = sigma_prime_invariants(red.gs);
        auto shed_si = surface_invariants(shed);
        // the gluing disk is counted once in each piece; boundary counts are
        // not additive because the strands may interleave around the circle
        if (par.euler != now.euler + shed_si.euler - 1)
            throw internal_error("plumbing split changed the surface");
        return true;
    }
    return false;
}

bool try_drop(Reduction& red) {
    const GeneralizedSmoothing& gs = red.gs;
    const Diagram& d = gs.base;
    for (int c1 = 0; c1 < d.n(); ++c1) {
        if (c1 == gs.c_minus || c1 == gs.c_plus) continue;
        std::pair<int, int> p1 = std::minmax(gs.gen_under(c1), gs.gen_over(c1));
        if (p1.first == p1.second) continue;
        for (int c2 = c1 + 1; c2 < d.n(); ++c2) {
            if (c2 == gs.c_minus || c2 == gs.c_plus) continue;
            std::pair<int, int> p2 =
                std::minmax(gs.gen_under(c2), gs.gen_over(c2));
            if (p2 != p1) continue;
            red.budget.tick();
            if (!next_to_each_other(gs, c1, c2)) continue;
            auto par = sigma_prime_invariants(gs);
            long long before = measure_of(gs);
            for (int drop : {c1, c2}) {
                int twin = drop == c1 ? c2 : c1;
                Diagram next;
                GeneralizedSmoothing out;
                try {
                    next = erase_crossing(d, drop, true);
                    out = build_generalized(
                        next, gs.c_minus - (gs.c_minus > drop ? 1 : 0),
                        gs.c_plus - (gs.c_plus > drop ? 1 : 0));
                } catch (const error&) {
                    continue;
                }
                if (measure_of(out) >= before)
                    throw internal_error("deletion failed to shrink the diagram");
                auto now = sigma_prime_invariants(out);
                if (now.euler != par.euler + 1)
                    throw internal_error("deleting the band changed the surface wrongly");
                Type2Move mv;
                mv.kind = Type2Move::Kind::DropBand;
                mv.a = drop;
                mv.b = twin;
                push_move(red, std::move(mv));
                red.gs = std::move(out);
                return true;
            }
            throw reduction_invariant_error(
                "dropping either of two adjacent bands broke the diagram");
        }
    }
    return false;
}

bool try_handle(Reduction& red) {
    const GeneralizedSmoothing& gs = red.gs;
    const Diagram& d = gs.base;
    const FaceSet& fs = gs.m.fs;
    const SmoothedMap& m = gs.m;
    for (int f = 0; f < fs.count(); ++f) {
        const auto& darts = fs.faces[f];
        for (size_t i = 0; i < darts.size(); ++i)
            for (size_t j = i + 1; j < darts.size(); ++j) {
                red.budget.tick();
                int xi = darts[i] / 4, si = darts[i] % 4;
                int xj = darts[j] / 4, sj = darts[j] % 4;
                int ci = m.circle_of_arc_end[darts[i]];
                int cj = m.circle_of_arc_end[darts[j]];
                if (ci == cj) continue;
                if (!gs.plain(ci) && !gs.plain(cj)) continue;
                // a flat band needs anti-parallel strands, which traverse the
                // face the same way round
                if (d.xs[xi].in(si) != d.xs[xj].in(sj)) continue;
                int a = d.xs[xi].s[si], b = d.xs[xj].s[sj];
                auto par = sigma_prime_invariants(gs);
                long long before = measure_of(gs);
                auto ends = arc_ends(d);
                Diagram next = d;
                next.xs[ends.at(a).head.x].s[ends.at(a).head.s] = b;
                next.xs[ends.at(b).head.x].s[ends.at(b).head.s] = a;
                validate(next);
                Type2Move mv;
                mv.kind = Type2Move::Kind::AddBand;
                mv.a = a;
                mv.b = b;
                push_move(red, std::move(mv));
                advance(red, next, gs.c_minus, gs.c_plus, before);
                if (sigma_prime_invariants(red.gs).euler != par.euler - 1)
                    throw internal_error("adding the band changed the surface wrongly");
                return true;
            }
    }
    return false;
}

std::string walk_signature(const GeneralizedSmoothing& gs) {
    auto ends = arc_ends(gs.base);
    std::ostringstream os;
    auto walk = [&](const std::vector<int>& arcs, int self, const char* name) {
        os << name << "[";
        bool first = true;
        for (int a : arcs) {
            int x = ends.at(a).head.x;
            if (!first) os << ",";
            first = false;
            if (x == gs.c_minus)
                os << "M";
            else if (x == gs.c_plus)
                os << "P";
            else {
                int gu = gs.gen_under(x), go = gs.gen_over(x);
                int other = gu == self ? go : gu;
                if (other == self)
                    os << "b@self";
                else if (other == gs.s1_id() || other == gs.s2_id())
                    os << "b@" << region_name(gs.region_of_crossing[x]);
                else
                    os << "c@" << region_name(gs.region_of_crossing[x]);
            }
        }
        os << "]";
    };
    walk(gs.s1_arcs, gs.s1_id(), "s1");
    os << ";";
    walk(gs.s2_arcs, gs.s2_id(), "s2");
    return os.str();
}

std::string degeneration_name(int u1, int u2, int o1, int o2) {
    std::ostringstream os;
    os << "degeneration(u1=" << u1 << ",u2=" << u2 << ",o1=" << o1
       << ",o2=" << o2 << ")";
    return os.str();
}

// Walks the rim circle of an oriented region from the negative crossing and
// returns which of the gaps between the special transitions hold the two
// feet of the region's circle.  Gaps count 1-based from the negative
// crossing; the specials run u2-crossing, partner, u1-crossing in order
// (whichever of them exist).
std::pair<int, int> foot_pair_code(const GeneralizedSmoothing& gs, int q, int rim,
                                   const std::vector<int>& expected) {
    const Circle& a = gs.m.circles[rim];
    int len = a.transitions();
    int start = -1;
    for (int i = 0; i < len; ++i)
        if (a.xing[i] == gs.c_minus) start = i;
    if (start < 0) throw internal_error("rim circle misses the negative crossing");
    std::vector<int> seen;
    std::vector<int> gaps;
    int passed = 0;
    for (int i = 1; i < len; ++i) {
        int x = a.xing[(start + i) % len];
        bool special = x == gs.c_plus;
        for (int u : expected) special = special || x == u;
        if (special) {
            ++passed;
            seen.push_back(x);
        } else if (gs.m.inc[x].cu == q || gs.m.inc[x].co == q) {
            gaps.push_back(passed + 1);
        } else {
            throw internal_error("unexpected transition on a special circle");
        }
    }
    // partner comes between the u2 side and the u1 side
    std::vector<int> order;
    for (int u : expected)
        if (gs.region_of_crossing[u] == GenRegion::U2) order.push_back(u);
    order.push_back(gs.c_plus);
    for (int u : expected)
        if (gs.region_of_crossing[u] == GenRegion::U1) order.push_back(u);
    if (seen != order)
        throw internal_error("special circle walk out of order");
    if (gaps.size() != 2)
        throw internal_error("rim walk did not meet exactly two feet");
    if (gaps[0] > gaps[1]) std::swap(gaps[0], gaps[1]);
    return {gaps[0], gaps[1]};
}

SpecialCaseId recognize(const GeneralizedSmoothing& gs) {
    const Diagram& d = gs.base;
    const SmoothedMap& m = gs.m;
    SpecialCaseId id;
    int circle_o1 = -1, circle_o2 = -1;
    for (size_t k = 0; k < m.circles.size(); ++k) {
        int ki = static_cast<int>(k);
        if (!gs.plain(ki)) continue;
        GenRegion r = gs.region_of_circle[ki];
        if (r == GenRegion::U1 || r == GenRegion::U2)
            throw reduction_invariant_error("a circle remains in a mixed region");
        if (m.circles[k].transitions() != 2)
            throw reduction_invariant_error(
                "a circle without exactly two bands remains");
        for (int x : m.circles[k].xing) {
            int other = m.inc[x].cu == ki ? m.inc[x].co : m.inc[x].cu;
            if (other != gs.k_under && other != gs.k_over)
                throw reduction_invariant_error(
                    "a band between two circles remains");
        }
        if (r == GenRegion::O1) {
            if (++id.o1_circles > 1)
                throw reduction_invariant_error(
                    "two circles crowd one oriented region");
            circle_o1 = ki;
        } else {
            if (++id.o2_circles > 1)
                throw reduction_invariant_error(
                    "two circles crowd one oriented region");
            circle_o2 = ki;
        }
    }
    std::vector<int> u_crossings;
    for (int x = 0; x < d.n(); ++x) {
        if (x == gs.c_minus || x == gs.c_plus) continue;
        int gu = gs.gen_under(x), go = gs.gen_over(x);
        bool cu_curve = gu == gs.s1_id() || gu == gs.s2_id();
        bool co_curve = go == gs.s1_id() || go == gs.s2_id();
        if (cu_curve && co_curve) {
            if (gu == go)
                throw reduction_invariant_error(
                    "a band from a curve to itself remains");
            GenRegion r = gs.region_of_crossing[x];
            if (r == GenRegion::O1 || r == GenRegion::O2)
                throw reduction_invariant_error(
                    "a band between the curves remains in an oriented region");
            if (r == GenRegion::U1) {
                if (++id.u1 > 1)
                    throw reduction_invariant_error(
                        "two bands crowd one mixed region");
            } else if (++id.u2 > 1) {
                throw reduction_invariant_error("two bands crowd one mixed region");
            }
            u_crossings.push_back(x);
        }
    }
    id.signature = walk_signature(gs);

    auto code_pair = [&](int q, int rim) {
        return foot_pair_code(gs, q, rim, u_crossings);
    };
    using Code = std::pair<int, int>;
    if (id.u1 == 1 && id.u2 == 1 && id.o1_circles == 1 && id.o2_circles == 1) {
        Code p = code_pair(circle_o1, gs.k_over);
        Code q = code_pair(circle_o2, gs.k_under);
        auto ok = [](Code c) {
            return c == Code{1, 3} || c == Code{2, 4} || c == Code{1, 4} ||
                   c == Code{2, 3};
        };
        if (!ok(p) || !ok(q))
            throw reduction_invariant_error(
                "a circle keeps two adjacent bands that could merge");
        if (p == Code{1, 3} && q == Code{2, 4})
            id.which = "D1";
        else if (p == Code{2, 4} && q == Code{1, 3})
            id.which = "D2";
        else if (p == Code{2, 3} && q == Code{1, 4})
            id.which = "D3";
        else if (p == Code{1, 4} && q == Code{2, 3})
            id.which = "D4";
        else
            throw reduction_invariant_error(
                "two movable bands remain in the mixed regions");
    } else if (id.u1 + id.u2 == 1 && id.o1_circles == 1 && id.o2_circles == 1) {
        Code p = code_pair(circle_o1, gs.k_over);
        Code q = code_pair(circle_o2, gs.k_under);
        bool low = id.u2 == 1;  // the lone band sits between the kept pair
        auto ok = [&](Code c) {
            return low ? (c == Code{1, 3} || c == Code{2, 3})
                       : (c == Code{1, 2} || c == Code{1, 3});
        };
        if (!ok(p) || !ok(q))
            throw reduction_invariant_error(
                "a circle keeps two adjacent bands that could merge");
        if (p != q)
            id.which = degeneration_name(id.u1, id.u2, id.o1_circles, id.o2_circles);
        else if (low && p == Code{1, 3})
            id.which = "D5";
        else if (low)
            id.which = "D6";
        else if (p == Code{1, 2})
            id.which = "D7";
        else
            id.which = "D8";
    } else {
        id.which = degeneration_name(id.u1, id.u2, id.o1_circles, id.o2_circles);
    }
    return id;
}

}  // namespace

Type2Trace reduce_type2(const GeneralizedSmoothing& gs, long long work_cap) {
    if (work_cap <= 0) throw precondition_error("work cap must be positive");
    Reduction red{gs, {}, WorkBudget(static_cast<std::uint64_t>(work_cap))};
    red.trace.root = gs.base;
    red.trace.c_minus = gs.c_minus;
    red.trace.c_plus = gs.c_plus;
    red.trace.prime = sigma_prime_invariants(gs);
    for (;;) {
        red.budget.tick(static_cast<std::uint64_t>(red.gs.base.n()) + 1);
        if (try_split(red)) continue;
        if (try_untwist(red)) continue;
        if (try_murasugi(red)) continue;
        if (try_drop(red)) continue;
        if (try_handle(red)) continue;
        red.trace.terminal = recognize(red.gs);
        return red.trace;
    }
}

Type2Trace reduce_type2(const Diagram& d, long long work_cap) {
    return reduce_type2(build_generalized(d), work_cap);
}

Diagram special_case_diagram(int i) {
    if (i < 1 || i > 8) throw precondition_error("special cases are numbered 1..8");
    bool full = i <= 4;
    // crossing ids: negative, partner, then the mixed-region bands, then the
    // circle feet (rim order)
    int cm = 0, cp = 1;
    std::pair<int, int> p, q;  // feet gaps on the s1-over rim / the other rim
    bool low = true;           // lone band between the kept pair (one-u family)
    if (full) {
        const std::pair<int, int> codes[4][2] = {
            {{1, 3}, {2, 4}}, {{2, 4}, {1, 3}}, {{2, 3}, {1, 4}}, {{1, 4}, {2, 3}}};
        p = codes[i - 1][0];
        q = codes[i - 1][1];
    } else {
        switch (i) {
            case 5: low = true, p = {1, 3}; break;
            case 6: low = true, p = {2, 3}; break;
            case 7: low = false, p = {1, 2}; break;
            default: low = false, p = {1, 3}; break;
        }
        q = p;
    }
    int u2x = -1, u1x = -1, nfeet0;
    if (full) {
        u2x = 2;
        u1x = 3;
        nfeet0 = 4;
    } else {
        (low ? u2x : u1x) = 2;
        nfeet0 = 3;
    }
    int f1a = nfeet0, f1b = nfeet0 + 1, f2a = nfeet0 + 2, f2b = nfeet0 + 3;
    int n = nfeet0 + 4;
    std::vector<int> oin(n, 1);
    oin[cm] = 3;

    // specials along each rim in walk order, with that rim's strand pair
    auto rim_plan = [&](bool over_rim, std::pair<int, int> gaps, int fa, int fb,
                        std::uint8_t foot_au) {
        StrandPlan plan;
        std::vector<std::pair<int, std::uint8_t>> specials;
        auto add = [&](int x, int au) {
            specials.push_back({x, static_cast<std::uint8_t>(au)});
        };
        // the rim behind O1 carries the under strand everywhere but at the
        // negative crossing; the other rim only there (left strand under)
        add(cm, over_rim ? 0 : 1);
        if (u2x >= 0) add(u2x, over_rim ? 1 : 0);
        add(cp, over_rim ? 1 : 0);
        if (u1x >= 0) add(u1x, over_rim ? 1 : 0);
        for (int g = 1; g <= static_cast<int>(specials.size()); ++g) {
            plan.path.push_back(specials[g - 1]);
            if (gaps.first == g) plan.path.push_back({fa, foot_au});
            if (gaps.second == g) plan.path.push_back({fb, foot_au});
        }
        return plan;
    };
    std::vector<StrandPlan> plans;
    plans.push_back(rim_plan(true, p, f1a, f1b, 0));   // rim behind O1
    plans.push_back(rim_plan(false, q, f2a, f2b, 1));  // rim behind O2
    StrandPlan q1, q2;
    q1.path = {{f1a, 1}, {f1b, 1}};
    q2.path = {{f2a, 0}, {f2b, 0}};
    plans.push_back(q1);
    plans.push_back(q2);
    return rebuild_plans(plans, oin);
}

void replay_trace(const Type2Trace& t, long long work_cap) {
    if (work_cap <= 0) throw precondition_error("work cap must be positive");
    WorkBudget budget(static_cast<std::uint64_t>(work_cap));
    GeneralizedSmoothing cur = build_generalized(t.root, t.c_minus, t.c_plus);
    if (!(sigma_prime_invariants(cur) == t.prime))
        throw reduction_invariant_error("recorded surface does not match the root");
    for (const auto& mv : t.moves) {
        budget.tick(static_cast<std::uint64_t>(cur.base.n()) + 1);
        if (fnv1a64(serialize_pd(cur.base)) != mv.pre_hash)
            throw reduction_invariant_error("state hash mismatch in the record");
        const Diagram& d = cur.base;
        switch (mv.kind) {
            case Type2Move::Kind::Split: {
                if (cur.m.fs.components <= 1)
                    throw reduction_invariant_error("recorded split of a connected diagram");
                auto pieces = split_components(d);
                if (mv.a < 0 || mv.a >= static_cast<int>(pieces.size()))
                    throw reduction_invariant_error("recorded kept part is missing");
                bool has_neg = false;
                for (const auto& x : pieces[mv.a].xs) has_neg = has_neg || x.sign() < 0;
                if (!has_neg)
                    throw reduction_invariant_error(
                        "recorded kept part lacks the negative crossing");
                std::vector<std::string> shed;
                for (size_t i = 0; i < pieces.size(); ++i)
                    if (static_cast<int>(i) != mv.a)
                        shed.push_back(serialize_pd(pieces[i]));
                if (shed != mv.shed)
                    throw reduction_invariant_error("shed parts do not match the record");
                int comp = cur.m.fs.comp_of_crossing[cur.c_minus];
                int cm2 = 0, cp2 = 0;
                for (int x = 0; x < d.n(); ++x) {
                    if (cur.m.fs.comp_of_crossing[x] != comp) continue;
                    if (x < cur.c_minus) ++cm2;
                    if (x < cur.c_plus) ++cp2;
                }
                cur = build_generalized(pieces[mv.a], cm2, cp2);
                break;
            }
            case Type2Move::Kind::Untwist: {
                int x = mv.a;
                if (x < 0 || x >= d.n() || x == cur.c_minus || x == cur.c_plus)
                    throw reduction_invariant_error("recorded crossing is not removable");
                if (cur.gen_under(x) == cur.gen_over(x) ||
                    cur.m.fs.corner(x, in_in_corner(d.xs[x])) !=
                        cur.m.fs.corner(x, out_out_corner(d.xs[x])))
                    throw reduction_invariant_error(
                        "recorded crossing is no longer nugatory");
                cur = build_generalized(erase_crossing(d, x, false, true),
                                        cur.c_minus - (cur.c_minus > x ? 1 : 0),
                                        cur.c_plus - (cur.c_plus > x ? 1 : 0));
                break;
            }
            case Type2Move::Kind::Murasugi: {
                int k = mv.a;
                if (k < 0 || k >= static_cast<int>(cur.m.circles.size()) ||
                    !cur.plain(k) || cur.m.circles[k].transitions() == 0 ||
                    interior_empty(cur.m, k) || exterior_empty(cur.m, k))
                    throw reduction_invariant_error(
                        "recorded circle cannot split the diagram");
                auto mp = murasugi_split(cur.m, k);
                bool keep_in = std::binary_search(mp.interior_xs.begin(),
                                                  mp.interior_xs.end(), cur.c_minus);
                if (keep_in != (mv.b == 1))
                    throw reduction_invariant_error(
                        "recorded side does not hold the negative crossing");
                const Diagram& kept = keep_in ? mp.interior : mp.exterior;
                const Diagram& shed = keep_in ? mp.exterior : mp.interior;
                if (mv.shed.size() != 1 || mv.shed[0] != serialize_pd(shed))
                    throw reduction_invariant_error("shed part does not match the record");
                const auto& keptxs = keep_in ? mp.interior_xs : mp.exterior_xs;
                auto rank = [&](int x) {
                    return static_cast<int>(
                        std::lower_bound(keptxs.begin(), keptxs.end(), x) -
                        keptxs.begin());
                };
                cur = build_generalized(kept, rank(cur.c_minus), rank(cur.c_plus));
                break;
            }
            case Type2Move::Kind::DropBand: {
                int drop = mv.a, twin = mv.b;
                for (int c : {drop, twin})
                    if (c < 0 || c >= d.n() || c == cur.c_minus || c == cur.c_plus)
                        throw reduction_invariant_error(
                            "recorded bands are not removable");
                if (drop == twin || !next_to_each_other(cur, drop, twin))
                    throw reduction_invariant_error(
                        "recorded bands are no longer next to each other");
                Diagram next;
                GeneralizedSmoothing out;
                try {
                    next = erase_crossing(d, drop, true);
                    out = build_generalized(next,
                                            cur.c_minus - (cur.c_minus > drop ? 1 : 0),
                                            cur.c_plus - (cur.c_plus > drop ? 1 : 0));
                } catch (const error&) {
                    throw reduction_invariant_error(
                        "recorded deletion no longer keeps the diagram valid");
                }
                cur = std::move(out);
                break;
            }
            case Type2Move::Kind::AddBand: {
                auto ends = arc_ends(d);
                if (!ends.count(mv.a) || !ends.count(mv.b))
                    throw reduction_invariant_error("recorded arcs are missing");
                const FaceSet& fs = cur.m.fs;
                bool witnessed = false;
                for (int f = 0; f < fs.count() && !witnessed; ++f) {
                    bool fwd_a = false, rev_a = false, fwd_b = false, rev_b = false;
                    for (int dart : fs.faces[f]) {
                        int x = dart / 4, s = dart % 4;
                        int arc = d.xs[x].s[s];
                        bool in = d.xs[x].in(s);
                        if (arc == mv.a) (in ? rev_a : fwd_a) = true;
                        if (arc == mv.b) (in ? rev_b : fwd_b) = true;
                    }
                    witnessed = (fwd_a && fwd_b) || (rev_a && rev_b);
                }
                int ra = cur.m.circle_of_arc_end[4 * ends.at(mv.a).head.x +
                                                 ends.at(mv.a).head.s];
                int rb = cur.m.circle_of_arc_end[4 * ends.at(mv.b).head.x +
                                                 ends.at(mv.b).head.s];
                if (!witnessed || ra == rb || (!cur.plain(ra) && !cur.plain(rb)))
                    throw reduction_invariant_error(
                        "recorded band interval is no longer available");
                Diagram next = d;
                next.xs[ends.at(mv.a).head.x].s[ends.at(mv.a).head.s] = mv.b;
                next.xs[ends.at(mv.b).head.x].s[ends.at(mv.b).head.s] = mv.a;
                validate(next);
                cur = build_generalized(next, cur.c_minus, cur.c_plus);
                break;
            }
        }
    }
    SpecialCaseId rec = recognize(cur);
    if (rec.which != t.terminal.which || rec.u1 != t.terminal.u1 ||
        rec.u2 != t.terminal.u2 || rec.o1_circles != t.terminal.o1_circles ||
        rec.o2_circles != t.terminal.o2_circles ||
        rec.signature != t.terminal.signature)
        throw reduction_invariant_error("terminal shape does not match the record");
}

std::string serialize_trace(const Type2Trace& t) {
    nlohmann::json j;
    j["root"] = serialize_pd(t.root);
    j["c-minus"] = t.c_minus;
    j["c-plus"] = t.c_plus;
    j["prime"] = {{"euler", t.prime.euler},
                  {"betti", t.prime.betti},
                  {"boundary", t.prime.boundary},
                  {"split-parts", t.prime.split_parts},
                  {"genus-twice", t.prime.genus_twice}};
    j["moves"] = nlohmann::json::array();
    for (const auto& mv : t.moves) {
        nlohmann::json m;
        m["kind"] = move_name(mv.kind);
        m["a"] = mv.a;
        m["b"] = mv.b;
        m["pre"] = hash_hex(mv.pre_hash);
        if (!mv.shed.empty()) m["shed"] = mv.shed;
        j["moves"].push_back(std::move(m));
    }
    j["terminal"] = {{"which", t.terminal.which},
                     {"u1", t.terminal.u1},
                     {"u2", t.terminal.u2},
                     {"o1-circles", t.terminal.o1_circles},
                     {"o2-circles", t.terminal.o2_circles},
                     {"signature", t.terminal.signature}};
    return j.dump();
}

}  // namespace sqp
