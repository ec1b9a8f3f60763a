#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sqp/seifert.hpp"

namespace sqp {

struct CycleReport {
    std::optional<int> min_weight;  // empty when the graph is a forest
    std::vector<int> witness;       // edge ids of a cycle achieving it
    long long cycles_examined = 0;
};

// Exhaustive scan over vertex-simple cycles. With decision_only the scan
// stops at the first cycle of weight < 2 and reports that cycle instead of
// the true minimum; without it the minimum and a witness are exact.
CycleReport min_cycle_weight(const PlaneWeightedGraph& g,
                             bool decision_only = false,
                             long long work_cap = kDefaultWorkCap);
inline CycleReport min_cycle_weight(const SeifertGraph& g,
                                    bool decision_only = false,
                                    long long work_cap = kDefaultWorkCap) {
    return min_cycle_weight(g.g, decision_only, work_cap);
}

// every cycle weight >= 2 (equivalently: no cycle at all)
bool is_canonical_qp(const PlaneWeightedGraph& g,
                     long long work_cap = kDefaultWorkCap);
inline bool is_canonical_qp(const SeifertGraph& g,
                            long long work_cap = kDefaultWorkCap) {
    return is_canonical_qp(g.g, work_cap);
}

enum class DiagramKind {
    Positive,
    AlmostPositiveTypeI,
    AlmostPositiveTypeII,
    Other,
};
const char* kind_name(DiagramKind k);

struct Classification {
    DiagramKind kind = DiagramKind::Other;
    int negative_count = 0;
    int negative_crossing = -1;  // set when exactly one crossing is negative
    int parallel_positive = -1;  // positive crossing on the same circle pair
};
Classification classify(const Diagram& d);

struct Verdict {
    bool sqp_yes = false;  // true = strongly quasipositive; false = undecided
    bool canonical_qp = false;
    CycleReport report;
    Classification cls;
    std::vector<std::string> reasons;
};
Verdict sqp_verdict(const Diagram& d, long long work_cap = kDefaultWorkCap);

// closed-form answer for (p,q,r) pretzel links with all parameters odd,
// used to cross-check the full pipeline
bool pretzel_oracle(int p, int q, int r);

}  // namespace sqp
