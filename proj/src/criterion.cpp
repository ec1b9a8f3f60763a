#include "sqp/criterion.hpp"

#include <algorithm>
#include <functional>

namespace sqp {

CycleReport min_cycle_weight(const PlaneWeightedGraph& g, bool decision_only,
                             long long work_cap) {
    CycleReport rep;
    WorkBudget budget(work_cap);
    auto better = [&](int w, std::vector<int> cyc) {
        if (!rep.min_weight || w < *rep.min_weight) {
            rep.min_weight = w;
            rep.witness = std::move(cyc);
        }
    };

    std::vector<std::vector<std::pair<int, int>>> adj(g.nv);
    for (int e = 0; e < g.ne(); ++e) {
        if (g.edges[e].u == g.edges[e].v) {
            ++rep.cycles_examined;
            better(g.edges[e].w, {e});
            continue;  // a self-loop is its own cycle; nothing passes through
        }
        adj[g.edges[e].u].push_back({e, g.edges[e].v});
        adj[g.edges[e].v].push_back({e, g.edges[e].u});
    }

    std::vector<char> vis(g.nv, 0), used(g.ne(), 0);
    std::vector<int> path;
    bool stop = decision_only && rep.min_weight && *rep.min_weight < 2;
    int start = 0;

    std::function<void(int, int)> dfs = [&](int v, int wsum) {
        for (auto [e, u] : adj[v]) {
            if (stop) return;
            budget.tick();
            if (used[e]) continue;
            if (u == start) {
                if (path.empty() || e == path.front()) continue;
                int w = wsum + g.edges[e].w;
                if (path.front() < e) {  // each cycle once, not per direction
                    ++rep.cycles_examined;
                    std::vector<int> cyc = path;
                    cyc.push_back(e);
                    better(w, std::move(cyc));
                }
                if (decision_only && w < 2) {
                    std::vector<int> cyc = path;
                    cyc.push_back(e);
                    rep.min_weight = w;
                    rep.witness = std::move(cyc);
                    stop = true;
                    return;
                }
                continue;
            }
            if (u < start || vis[u]) continue;
            vis[u] = 1;
            used[e] = 1;
            path.push_back(e);
            dfs(u, wsum + g.edges[e].w);
            path.pop_back();
            used[e] = 0;
            vis[u] = 0;
        }
    };
    for (start = 0; start < g.nv && !stop; ++start) dfs(start, 0);
    return rep;
}

bool is_canonical_qp(const PlaneWeightedGraph& g, long long work_cap) {
    auto rep = min_cycle_weight(g, true, work_cap);
    return !rep.min_weight || *rep.min_weight >= 2;
}

const char* kind_name(DiagramKind k) {
    switch (k) {
        case DiagramKind::Positive: return "positive";
        case DiagramKind::AlmostPositiveTypeI: return "almost-positive-type-I";
        case DiagramKind::AlmostPositiveTypeII: return "almost-positive-type-II";
        case DiagramKind::Other: return "other";
    }
    return "other";
}

Classification classify(const Diagram& d) {
    validate(d);
    Classification c;
    int neg = -1;
    for (int x = 0; x < d.n(); ++x)
        if (d.xs[x].sign() < 0) {
            ++c.negative_count;
            neg = x;
        }
    if (c.negative_count == 0) {
        c.kind = DiagramKind::Positive;
        return c;
    }
    if (c.negative_count > 1) {
        c.kind = DiagramKind::Other;
        return c;
    }
    c.negative_crossing = neg;
    auto m = seifert_circles(d);
    auto circle_pair = [&](int x) {
        return std::pair<int, int>{std::min(m.inc[x].cu, m.inc[x].co),
                                   std::max(m.inc[x].cu, m.inc[x].co)};
    };
    auto np = circle_pair(neg);
    c.kind = DiagramKind::AlmostPositiveTypeI;
    for (int x = 0; x < d.n(); ++x)
        if (x != neg && circle_pair(x) == np) {
            c.kind = DiagramKind::AlmostPositiveTypeII;
            c.parallel_positive = x;
            break;
        }
    return c;
}

Verdict sqp_verdict(const Diagram& d, long long work_cap) {
    Verdict v;
    v.cls = classify(d);
    auto sg = seifert_graph(move_infinity(seifert_circles(d)));
    v.report = min_cycle_weight(sg, false, work_cap);
    v.canonical_qp = !v.report.min_weight || *v.report.min_weight >= 2;
    switch (v.cls.kind) {
        case DiagramKind::Positive:
            v.sqp_yes = true;
            v.reasons.push_back("positive-diagram");
            break;
        case DiagramKind::AlmostPositiveTypeI:
        case DiagramKind::AlmostPositiveTypeII:
            v.sqp_yes = true;
            v.reasons.push_back("almost-positive-diagram");
            break;
        case DiagramKind::Other:
            break;
    }
    if (v.canonical_qp) {
        v.sqp_yes = true;
        v.reasons.push_back("canonical-surface-criterion");
    }
    return v;
}

bool pretzel_oracle(int p, int q, int r) {
    for (int t : {p, q, r})
        if (t % 2 == 0)
            throw precondition_error("pretzel parameters must be odd");
    return p + q < 0 && q + r < 0 && r + p < 0;
}

}  // namespace sqp
