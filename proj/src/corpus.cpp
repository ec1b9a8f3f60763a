#include "sqp/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "sqp/certify.hpp"

namespace sqp {

namespace {

Diagram finish(Diagram d) {
    derive_orientations(d);
    validate(d);
    faces(d);  // planarity self-check for generated wiring
    return d;
}

int wrap1(int v, int m) { return (v - 1) % m + 1; }

}  // namespace

Diagram gen_torus(int strands, int n) {
    if (strands != 2) throw precondition_error("only 2-strand torus links");
    if (n < 1) throw precondition_error("need at least one crossing");
    Diagram d;
    const int m = 2 * n;
    if (n % 2 == 1) {
        // knot case: one strand, arcs numbered along it
        for (int i = 0; i < n; ++i) {
            Crossing c;
            c.s = {2 * i + 1, wrap1(2 * i + n + 1, m), 2 * i + 2,
                   wrap1(2 * i + n + 2, m)};
            d.xs.push_back(c);
        }
    } else {
        // link case: component arcs 1..n and n+1..2n, alternating roles
        auto wa = [&](int v) { return v > n ? v - n : v; };
        auto wb = [&](int v) { return v > m ? v - n : v; };
        for (int i = 0; i < n; ++i) {
            Crossing c;
            if (i % 2 == 0)
                c.s = {i + 1, n + i + 1, wa(i + 2), wb(n + i + 2)};
            else
                c.s = {n + i + 1, i + 1, wb(n + i + 2), wa(i + 2)};
            d.xs.push_back(c);
        }
    }
    d = finish(std::move(d));
    for (const auto& x : d.xs)
        if (x.sign() != 1) throw internal_error("torus braid sign broke");
    return d;
}

Diagram gen_pretzel(int p, int q, int r) {
    const int t[3] = {p, q, r};
    for (int v : t)
        if (v % 2 == 0) throw precondition_error("pretzel parameters must be odd");

    // per band b: down-strand arcs d[b][0..k], up-strand arcs u[b][0..k];
    // d[b][0] and u[b][k] are shared with the neighbouring band
    int k[3], next = 1;
    std::vector<std::vector<int>> dn(3), up(3);
    for (int b = 0; b < 3; ++b) {
        k[b] = t[b] < 0 ? -t[b] : t[b];
        dn[b].assign(k[b] + 1, 0);
        up[b].assign(k[b] + 1, 0);
        for (int i = 1; i <= k[b]; ++i) dn[b][i] = next++;
        for (int i = 0; i < k[b]; ++i) up[b][i] = next++;
    }
    for (int b = 0; b < 3; ++b) {
        int a = (b + 2) % 3;
        dn[b][0] = up[a][0];        // top hub: previous band's up exit
        up[b][k[b]] = dn[a][k[a]];  // bottom hub: previous band's down exit
    }

    Diagram d;
    for (int b = 0; b < 3; ++b) {
        bool pos = t[b] < 0;
        for (int i = 0; i < k[b]; ++i) {
            int di = dn[b][i], doo = dn[b][i + 1];
            int ui = up[b][i + 1], uo = up[b][i];
            Crossing c;
            if (pos)
                c.s = i % 2 == 0 ? std::array<int, 4>{ui, di, uo, doo}
                                 : std::array<int, 4>{di, ui, doo, uo};
            else
                c.s = i % 2 == 0 ? std::array<int, 4>{di, uo, doo, ui}
                                 : std::array<int, 4>{ui, doo, uo, di};
            d.xs.push_back(c);
        }
    }
    d = finish(std::move(d));
    for (int b = 0, x = 0; b < 3; ++b)
        for (int i = 0; i < k[b]; ++i, ++x)
            if (d.xs[x].sign() != (t[b] < 0 ? 1 : -1))
                throw internal_error("pretzel band sign calibration broke");
    return d;
}

Diagram gen_random(int n_crossings, SignProfile profile, std::uint64_t seed) {
    if (n_crossings < 1) throw precondition_error("need at least one crossing");
    Rng rng(seed);
    const int cols = 2 + rng.below(std::min(4, n_crossings));
    int neg_at = profile == SignProfile::almost_positive
                     ? rng.below(n_crossings)
                     : -1;

    int next = 1;
    std::vector<int> top(cols), cur(cols);
    std::vector<int> touched(cols, 0);
    for (int c = 0; c < cols; ++c) top[c] = cur[c] = next++;

    Diagram d;
    for (int i = 0; i < n_crossings; ++i) {
        int c = rng.below(cols - 1);
        bool pos = true;
        if (profile == SignProfile::almost_positive)
            pos = i != neg_at;
        else if (profile == SignProfile::mixed)
            pos = rng.coin();
        int a = next++, b = next++;  // continuations at columns c, c+1
        Crossing x;
        x.s = pos ? std::array<int, 4>{cur[c], cur[c + 1], b, a}
                  : std::array<int, 4>{cur[c + 1], b, a, cur[c]};
        d.xs.push_back(x);
        cur[c] = a;
        cur[c + 1] = b;
        touched[c] = touched[c + 1] = 1;
    }
    for (int c = 0; c < cols; ++c) {
        if (!touched[c]) {
            d.loops.push_back(top[c]);
            continue;
        }
        for (auto& x : d.xs)  // close the braid: last arc is the first one
            for (int& s : x.s)
                if (s == cur[c]) s = top[c];
    }
    d = finish(std::move(d));
    int negs = 0;
    for (const auto& x : d.xs) negs += x.sign() < 0;
    bool ok = profile == SignProfile::positive ? negs == 0
              : profile == SignProfile::almost_positive ? negs == 1
                                                        : true;
    if (!ok) throw internal_error("random braid sign calibration broke");
    return d;
}

PlaneWeightedGraph gen_star_graph(int n_vertices, std::uint64_t seed) {
    if (n_vertices < 3) throw precondition_error("need at least three vertices");
    Rng rng(seed);
    PlaneWeightedGraph g;
    g.nv = 2;
    g.edges = {{0, 1, 1, -1}, {0, 1, 1, -1}};
    g.rot = {{0, 2}, {3, 1}};

    auto grow = [&](int max_new_vertices, bool need_new_vertex) -> bool {
        auto regions = graph_regions(g);
        auto cls = bipartition(g);
        // corners of each region: (vertex, cut position)
        std::vector<std::vector<std::pair<int, int>>> corner(regions.count());
        for (int v = 0; v < g.nv; ++v) {
            int deg = g.degree(v);
            for (int i = 0; i < deg; ++i)
                corner[regions.region_of[g.rot[v][(i + 1) % deg]]].push_back(
                    {v, i});
        }
        for (int attempt = 0; attempt < 30; ++attempt) {
            int r = rng.below(regions.count());
            const auto& cs = corner[r];
            if (cs.size() < 2) continue;
            auto [a, ca] = cs[rng.below(static_cast<int>(cs.size()))];
            auto [b, cb] = cs[rng.below(static_cast<int>(cs.size()))];
            if (a == b) continue;
            // bipartite parity: cross-class ears have odd length, same-class even
            int kk = cls[a] != cls[b] ? (need_new_vertex ? 3 : 1) : 2;
            if (kk - 1 > max_new_vertices) continue;
            g = insert_path(g, a, ca, b, cb, kk);
            return true;
        }
        return false;
    };

    // grow toward the target; a gap of exactly one vertex may be unreachable
    // from a given bipartition, in which case we settle one short
    while (g.nv < n_vertices)
        if (!grow(n_vertices - g.nv, true)) break;
    for (int extra = rng.below(3); extra > 0; --extra) grow(0, false);

    // sprinkle negative edges where no degree-2 vertex sees them and all
    // cycle weights stay >= 2
    for (int tries = rng.below(4); tries > 0; --tries) {
        int e = rng.below(g.ne());
        if (g.edges[e].w < 0) continue;
        if (g.degree(g.edges[e].u) < 3 || g.degree(g.edges[e].v) < 3) continue;
        g.edges[e].w = -1;
        if (!is_canonical_qp(g)) g.edges[e].w = 1;
    }

    validate_graph(g);
    bipartition(g);
    if (!biconnected_blocks(g).cut_vertices.empty())
        throw internal_error("ear construction lost 2-connectivity");
    if (!is_canonical_qp(g))
        throw internal_error("ear construction lost the cycle condition");
    return g;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::vector<TableRow> ingest_table(std::istream& in, bool strict,
                                   const RowDiagnostic& on_error) {
    std::string line;
    if (!std::getline(in, line)) throw parse_error("empty table: missing header");
    auto hdr = split_csv_line(line);
    if (hdr.size() < 2 || trim(hdr[0]) != "name" || trim(hdr[1]) != "pd")
        throw parse_error("table header must be name,pd");

    std::vector<TableRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        auto fail = [&](const std::string& what) {
            if (strict) {
                std::ostringstream os;
                os << "line " << lineno << ": " << what;
                throw parse_error(os.str());
            }
            if (on_error) on_error(lineno, what);
        };
        if (fields.size() < 2) {
            fail("expected name,pd");
            continue;
        }
        std::string pd = fields[1];
        for (size_t i = 2; i < fields.size(); ++i) pd += "," + fields[i];
        try {
            TableRow row;
            row.name = trim(fields[0]);
            row.d = parse_pd(pd);
            row.line = lineno;
            rows.push_back(std::move(row));
        } catch (const error& e) {
            fail(e.what());
        }
    }
    return rows;
}

std::vector<TableRow> ingest_table(const std::string& path, bool strict,
                                   const RowDiagnostic& on_error) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open table file: " + path);
    return ingest_table(in, strict, on_error);
}

ScanRecord scan_one(const std::string& name, const std::string& pd,
                    const ScanOptions& opt) {
    ScanRecord rec;
    rec.name = name;
    rec.pd = pd;
    auto t0 = std::chrono::steady_clock::now();
    try {
        Diagram d = parse_pd(pd);
        auto v = sqp_verdict(d, opt.work_cap);
        rec.kind = kind_name(v.cls.kind);
        rec.min_cycle_weight = v.report.min_weight;
        rec.canonical_qp = v.canonical_qp;
        rec.sqp_yes = v.sqp_yes;
        rec.inv = surface_invariants(d);
        if (opt.with_certificate) rec.certificate = certificate_status(d, opt.work_cap);
        rec.ok = true;
    } catch (const error& e) {
        rec.ok = false;
        rec.error = e.what();
        if (opt.strict) throw;
    }
    rec.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    return rec;
}

std::vector<ScanRecord> batch_scan(
    const std::vector<std::pair<std::string, std::string>>& inputs,
    const ScanOptions& opt) {
    std::vector<ScanRecord> out(inputs.size());
    int jobs = std::max(1, opt.jobs);
    if (jobs == 1) {
        for (size_t i = 0; i < inputs.size(); ++i)
            out[i] = scan_one(inputs[i].first, inputs[i].second, opt);
        return out;
    }
    std::atomic<size_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    auto worker = [&] {
        for (;;) {
            size_t i = cursor.fetch_add(1);
            if (i >= inputs.size()) return;
            try {
                out[i] = scan_one(inputs[i].first, inputs[i].second, opt);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

}  // namespace sqp
