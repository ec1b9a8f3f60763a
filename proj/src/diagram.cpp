#include "sqp/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sqp {

std::map<int, ArcEnds> arc_table(const Diagram& d) {
    std::map<int, ArcEnds> t;
    for (int x = 0; x < d.n(); ++x)
        for (int s = 0; s < 4; ++s) {
            ArcEnds& e = t[d.xs[x].s[s]];
            if (e.count < 2) e.at[e.count] = {x, s};
            ++e.count;
        }
    return t;
}

Diagram parse_pd(const std::string& text) {
    Diagram d;
    size_t i = 0;
    const size_t n = text.size();

    auto skip = [&] {
        for (;;) {
            while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
            if (i < n && text[i] == '#') {
                while (i < n && text[i] != '\n') ++i;
                continue;
            }
            break;
        }
    };
    auto number = [&]() -> int {
        skip();
        if (i >= n || !std::isdigit(static_cast<unsigned char>(text[i])))
            throw parse_error("expected arc label at offset " + std::to_string(i));
        long v = 0;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
            v = v * 10 + (text[i] - '0');
            if (v > 1000000000) throw parse_error("arc label out of range");
            ++i;
        }
        if (v == 0) throw parse_error("arc labels are positive integers");
        return static_cast<int>(v);
    };
    auto expect = [&](char c) {
        skip();
        if (i >= n || text[i] != c)
            throw parse_error(std::string("expected '") + c + "' at offset " +
                              std::to_string(i));
        ++i;
    };

    for (;;) {
        skip();
        if (i >= n) break;
        char k = text[i];
        if (k == 'X' || k == 'x') {
            ++i;
            expect('(');
            Crossing c;
            c.s[0] = number();
            expect(',');
            c.s[1] = number();
            expect(',');
            c.s[2] = number();
            expect(',');
            c.s[3] = number();
            expect(')');
            d.xs.push_back(c);
        } else if (k == 'O' || k == 'o') {
            ++i;
            expect('(');
            d.loops.push_back(number());
            expect(')');
        } else {
            throw parse_error(std::string("unexpected character '") + k +
                              "' at offset " + std::to_string(i));
        }
    }
    derive_orientations(d);
    validate(d);
    return d;
}

std::string serialize_pd(const Diagram& d) {
    std::ostringstream o;
    bool first = true;
    for (const Crossing& c : d.xs) {
        if (!first) o << ' ';
        first = false;
        o << "X(" << c.s[0] << ',' << c.s[1] << ',' << c.s[2] << ',' << c.s[3]
          << ')';
    }
    for (int l : d.loops) {
        if (!first) o << ' ';
        first = false;
        o << "O(" << l << ')';
    }
    return o.str();
}

namespace {

// the other occurrence of the arc at (x, s)
std::pair<int, int> other_end(std::map<int, ArcEnds>& tab, const Diagram& d,
                              int x, int s) {
    const ArcEnds& e = tab[d.xs[x].s[s]];
    if (e.at[0] == std::make_pair(x, s)) return e.at[1];
    return e.at[0];
}

}  // namespace

void derive_orientations(Diagram& d) {
    auto tab = arc_table(d);
    for (const auto& [lab, e] : tab)
        if (e.count != 2)
            throw structural_error("arc " + std::to_string(lab) + " has " +
                                   std::to_string(e.count) + " ends, need 2");

    for (Crossing& c : d.xs) c.over_in = 0;

    // +1 inbound, -1 outbound, 0 not yet known
    auto dir = [&](int x, int s) -> int {
        if (s == 0) return +1;
        if (s == 2) return -1;
        int oi = d.xs[x].over_in;
        if (oi == 0) return 0;
        return s == oi ? +1 : -1;
    };

    std::vector<std::pair<int, int>> q;
    q.reserve(4 * d.xs.size());
    for (int x = 0; x < d.n(); ++x) {
        q.push_back({x, 0});
        q.push_back({x, 2});
    }
    size_t qi = 0;
    int scan = 0;  // lowest crossing that might still be unresolved
    for (;;) {
        while (qi < q.size()) {
            auto [x, s] = q[qi++];
            int k = dir(x, s);
            auto [y, t] = other_end(tab, d, x, s);
            int m = dir(y, t);
            if (m == 0) {
                // over slot with unknown direction; the arc forces it
                d.xs[y].over_in = (-k == +1) ? t : 4 - t;
                q.push_back({y, 1});
                q.push_back({y, 3});
            } else if (m != -k) {
                throw orientation_error(
                    "arc " + std::to_string(d.xs[x].s[s]) +
                    " cannot be oriented consistently");
            }
        }
        while (scan < d.n() && d.xs[scan].over_in != 0) ++scan;
        if (scan >= d.n()) break;
        // a component that is over at every crossing it enters; direction is
        // a free choice, fixed deterministically
        d.xs[scan].over_in = 1;
        q.push_back({scan, 1});
        q.push_back({scan, 3});
    }
}

void check_orientations(const Diagram& d) {
    for (int x = 0; x < d.n(); ++x)
        if (d.xs[x].over_in != 1 && d.xs[x].over_in != 3)
            throw orientation_error("crossing " + std::to_string(x) +
                                    " has no over-strand direction");
    auto tab = arc_table(d);
    for (const auto& [lab, e] : tab) {
        if (e.count != 2)
            throw structural_error("arc " + std::to_string(lab) + " has " +
                                   std::to_string(e.count) + " ends, need 2");
        int sum = 0;
        for (const auto& [x, s] : e.at)
            sum += d.xs[x].in(s) ? +1 : -1;
        if (sum != 0)
            throw orientation_error("arc " + std::to_string(lab) +
                                    " lacks a head/tail pair");
    }
}

void validate(const Diagram& d) {
    for (const Crossing& c : d.xs)
        for (int s : c.s)
            if (s <= 0) throw structural_error("non-positive arc label");
    auto tab = arc_table(d);
    std::map<int, int> loop_count;
    for (int l : d.loops) {
        if (l <= 0) throw structural_error("non-positive loop label");
        if (tab.count(l))
            throw structural_error("loop label " + std::to_string(l) +
                                   " also used by a crossing");
        if (++loop_count[l] > 1)
            throw structural_error("duplicate loop label " + std::to_string(l));
    }
    check_orientations(d);
    faces(d);  // Euler check per component lives there
}

Diagram mirror(const Diagram& d) {
    Diagram m;
    m.loops = d.loops;
    m.xs.reserve(d.xs.size());
    for (const Crossing& c : d.xs) {
        if (c.over_in != 1 && c.over_in != 3)
            throw precondition_error("mirror needs derived orientations");
        Crossing r;
        // the old over-strand becomes the under-strand: rotate so that its
        // entry slot becomes slot 0.  Strand directions are carried over.
        for (int j = 0; j < 4; ++j) r.s[j] = c.s[(c.over_in + j) % 4];
        r.over_in = 4 - c.over_in;
        m.xs.push_back(r);
    }
    validate(m);
    return m;
}

std::vector<Diagram> split_components(const Diagram& d) {
    UnionFind uf(d.n());
    auto tab = arc_table(d);
    for (const auto& [lab, e] : tab) uf.unite(e.at[0].first, e.at[1].first);

    std::vector<Diagram> out;
    std::map<int, int> comp_index;  // uf root -> output slot
    for (int x = 0; x < d.n(); ++x) {
        int r = uf.find(x);
        auto it = comp_index.find(r);
        if (it == comp_index.end()) {
            comp_index.emplace(r, static_cast<int>(out.size()));
            out.emplace_back();
            it = comp_index.find(r);
        }
        out[it->second].xs.push_back(d.xs[x]);
    }
    for (int l : d.loops) {
        Diagram dl;
        dl.loops.push_back(l);
        out.push_back(dl);
    }
    return out;
}

FaceSet faces(const Diagram& d) {
    FaceSet f;
    auto tab = arc_table(d);
    for (const auto& [lab, e] : tab)
        if (e.count != 2)
            throw structural_error("arc " + std::to_string(lab) + " has " +
                                   std::to_string(e.count) + " ends, need 2");

    const int n = d.n();
    UnionFind uf(n);
    for (const auto& [lab, e] : tab) uf.unite(e.at[0].first, e.at[1].first);

    f.comp_of_crossing.resize(n);
    std::map<int, int> comp_index;
    for (int x = 0; x < n; ++x) {
        int r = uf.find(x);
        auto it = comp_index.find(r);
        if (it == comp_index.end())
            it = comp_index.emplace(r, f.components++).first;
        f.comp_of_crossing[x] = it->second;
    }

    // trace face orbits: leave along (x,s), arrive at the arc's other end
    // (y,t), continue along the next slot around y
    f.face_of.assign(4 * n, -1);
    for (int start = 0; start < 4 * n; ++start) {
        if (f.face_of[start] != -1) continue;
        int id = f.count();
        f.faces.emplace_back();
        f.comp_of_face.push_back(f.comp_of_crossing[start / 4]);
        int dart = start;
        do {
            f.face_of[dart] = id;
            f.faces[id].push_back(dart);
            auto [y, t] = other_end(tab, d, dart / 4, dart % 4);
            dart = 4 * y + (t + 1) % 4;
        } while (dart != start);
    }

    // every map component must close up as a sphere: V - E + F = 2, E = 2V
    std::vector<int> vcount(f.components, 0), fcount(f.components, 0);
    for (int x = 0; x < n; ++x) ++vcount[f.comp_of_crossing[x]];
    for (int c : f.comp_of_face) ++fcount[c];
    for (int c = 0; c < f.components; ++c)
        if (fcount[c] != vcount[c] + 2)
            throw structural_error(
                "component " + std::to_string(c) + " has " +
                std::to_string(vcount[c]) + " crossings but " +
                std::to_string(fcount[c]) + " faces; map is not planar");

    for (size_t l = 0; l < d.loops.size(); ++l) {
        int c = f.components++;
        f.comp_of_loop.push_back(c);
        int a = f.count(), b = a + 1;
        f.faces.emplace_back();
        f.faces.emplace_back();
        f.comp_of_face.push_back(c);
        f.comp_of_face.push_back(c);
        f.loop_faces.push_back({a, b});
    }

    if (f.count() == 0) {
        // empty diagram: just the plane
        f.faces.emplace_back();
        f.comp_of_face.push_back(0);
        f.components = 1;
    }
    return f;
}

}  // namespace sqp
