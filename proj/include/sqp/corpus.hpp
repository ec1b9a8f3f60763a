#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sqp/criterion.hpp"

namespace sqp {

// closure of the 2-strand braid with n positive crossings, classic labeling
Diagram gen_torus(int strands, int n);

// three anti-parallel twist bands between two hub circles; parameter t gives
// |t| crossings of sign -sign(t), so the Seifert graph is the theta graph
// with path lengths |p|,|q|,|r| and per-path weights -p,-q,-r
Diagram gen_pretzel(int p, int q, int r);

enum class SignProfile { positive, almost_positive, mixed };
Diagram gen_random(int n_crossings, SignProfile profile, std::uint64_t seed);

// random 2-connected plane bipartite multigraph built from ear insertions,
// filtered so every sample keeps all cycle weights >= 2 and no degree-2
// vertex touches a negative edge; grows to n_vertices when bipartition
// parity allows, otherwise settles one vertex short
PlaneWeightedGraph gen_star_graph(int n_vertices, std::uint64_t seed);

struct TableRow {
    std::string name;
    Diagram d;
    int line = 0;
};
using RowDiagnostic = std::function<void(int line, const std::string& what)>;
std::vector<TableRow> ingest_table(std::istream& in, bool strict = false,
                                   const RowDiagnostic& on_error = {});
std::vector<TableRow> ingest_table(const std::string& path, bool strict = false,
                                   const RowDiagnostic& on_error = {});

struct ScanOptions {
    bool strict = false;
    bool with_certificate = false;
    long long work_cap = kDefaultWorkCap;
    int jobs = 1;
};

struct ScanRecord {
    std::string name;
    std::string pd;
    bool ok = false;
    std::string error;  // failure note when !ok
    std::string kind;
    std::optional<int> min_cycle_weight;
    bool canonical_qp = false;
    bool sqp_yes = false;
    SurfaceInvariants inv{};
    std::string certificate;  // "", "verified", or "failed: ..."
    double elapsed_ms = 0;
};

ScanRecord scan_one(const std::string& name, const std::string& pd,
                    const ScanOptions& opt = {});
std::vector<ScanRecord> batch_scan(
    const std::vector<std::pair<std::string, std::string>>& inputs,
    const ScanOptions& opt = {});

}  // namespace sqp
