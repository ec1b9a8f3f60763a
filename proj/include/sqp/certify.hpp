#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sqp/diagram.hpp"
#include "sqp/graph.hpp"
#include "sqp/seifert.hpp"
#include "sqp/util.hpp"

namespace sqp {

// The four structural clauses the reduction keeps restoring before it dares
// to insert chords: planar rotation system, cycle-weight criterion,
// 2-connectivity (needs >= 3 vertices), no degree-2 vertex flanked by one
// positive and one negative band.
struct StarReport {
    bool plane = false;
    bool cycles_positive = false;
    bool two_connected = false;
    bool no_mixed_degree2 = false;

    bool all() const {
        return plane && cycles_positive && two_connected && no_mixed_degree2;
    }
};
StarReport property_star(const PlaneWeightedGraph& g,
                         long long work_cap = kDefaultWorkCap);

// Reidemeister II at graph level: v must have degree 2 with one positive and
// one negative edge.  The vertex and both edges are removed and the two
// neighbours merge (when they coincide, removal alone does the job).
PlaneWeightedGraph reduce_RII(const PlaneWeightedGraph& g, int v);

// Removes e2 from a pair of parallel positive edges bounding an empty bigon
// (so the pair is rotation-adjacent at both endpoints).  The surface loses a
// plumbed positive Hopf band; what remains carries the same quasipositivity.
PlaneWeightedGraph delete_parallel_positive(const PlaneWeightedGraph& g,
                                            int e1, int e2);

// Cutting at cut vertices: one standalone graph per 2-connected block, the
// cut vertices copied into each piece, ordered by smallest member edge id.
// Bridges are dropped - the band they carry untwists - and any vertex left
// bare by that is reported separately (it reduces to a disk).
struct CutSplit {
    std::vector<PlaneWeightedGraph> pieces;
    std::vector<int> bridges;        // dropped edge ids, ascending
    std::vector<int> bare_vertices;  // original vertex ids, ascending
};
CutSplit split_cut_vertex(const PlaneWeightedGraph& g);

// Splits a connected smoothed diagram along circle k into the diagram inside
// k and the diagram outside it; the circle itself survives in both pieces.
// A side with no crossings degenerates to the bare circle.  Orientations are
// inherited from the parent rather than re-derived, so each piece bounds the
// matching summand surface even when a strand is over-only in its piece.
struct MurasugiPieces {
    Diagram interior, exterior;
    std::vector<int> interior_xs, exterior_xs;  // parent crossing ids, in order
};
MurasugiPieces murasugi_split(const SmoothedMap& m, int k);

// Index of the lowest region whose boundary weight is >= 4.  Such a region
// must exist whenever the star clauses hold; if none does, a
// reduction_invariant_error reports the broken expectation.
int find_heavy_region(const PlaneWeightedGraph& g, const GraphRegions& r);

// A chord across a region boundary: vertices v and w at cycle distance
// d >= 2 such that every vertex-simple path between them weighs >= 4 - d.
struct ChordSpec {
    int v = -1, w = -1, d = 0;
};

// Searches the boundary of the given region for a chord.  With a negative
// boundary edge the walk-based recipe is tried (start after a positive edge
// followed by negatives, end past the next positive edge); on all-positive
// boundaries every vertex pair is scanned in lexicographic order.  Each
// candidate is checked by exhaustive path enumeration under the budget.
ChordSpec find_split(const PlaneWeightedGraph& g, const GraphRegions& r,
                     int region, WorkBudget& budget);

// Realizes a chord through the region: d == 2 merges v and w across it,
// d > 2 inserts a path of d-2 positive edges.  A boundary of length l splits
// into boundaries of lengths 2d-2 and l-2, so the region-size profile drops.
PlaneWeightedGraph insert_chord(const PlaneWeightedGraph& g, int region,
                                const ChordSpec& c);

// edge ids lying in exactly one of the two sets, ascending
std::vector<int> edge_symmetric_difference(std::vector<int> a,
                                           std::vector<int> b);

// Decomposes an edge set in which every vertex has even degree into
// edge-disjoint vertex-simple cycles (edge ids in traversal order).
std::vector<std::vector<int>> cycle_decomposition(
    const PlaneWeightedGraph& g, const std::vector<int>& edge_ids);

// ---------------------------------------------------------------------------
// Certificates: a replayable tree of reduction steps.

enum class StepKind {
    SplitComponents,
    SplitCutVertex,
    MurasugiSplit,
    ReidemeisterII,
    DeleteParallelPositive,
    InsertChord,
    LeafDisk,
    LeafTorusFiber,
};

struct CertStep {
    StepKind kind = StepKind::LeafDisk;
    int circle = -1;       // MurasugiSplit
    int vertex = -1;       // ReidemeisterII
    int e1 = -1, e2 = -1;  // DeleteParallelPositive
    int region = -1;       // InsertChord: region index plus the chord data
    int v = -1, w = -1, d = 0;
    int n = 0;  // LeafTorusFiber: number of parallel positive bands
    std::string justification;
    std::uint64_t pre_hash = 0;  // hash of the state the step applies to
    std::vector<CertStep> children;
};

// Root state plus the full step tree.  Graph states hash through
// serialize_graph, diagram states through serialize_pd; the hand-off from a
// plane diagram to its Seifert graph is implicit and deterministic.
struct Certificate {
    bool diagram_rooted = false;
    std::string root;
    CertStep step;
};

// Reduces the graph to disk / positive-torus-fiber leaves, recording every
// step.  Precondition: the cycle-weight criterion holds; otherwise a
// precondition_error.  Search failures surface as reduction_invariant_error.
Certificate certify(const PlaneWeightedGraph& g,
                    long long work_cap = kDefaultWorkCap);

// Same, starting from a diagram: components are split, nested circles are
// split off Murasugi-style until each piece is plane, then the graph
// reduction takes over.
Certificate certify(const Diagram& d, long long work_cap = kDefaultWorkCap);

// Replays a certificate from its recorded root, re-checking hashes, step
// preconditions and the profile descent; chord steps are re-verified by an
// independent path enumeration.  On failure *why names the first bad step.
bool verify(const Certificate& c, std::string* why = nullptr,
            long long work_cap = kDefaultWorkCap);

std::string serialize_certificate(const Certificate& c);
Certificate parse_certificate(const std::string& text);

// One-line summary for scan output: "verified", "not-applicable: ..." when
// the criterion rejects the surface, or "failed: ...".
std::string certificate_status(const Diagram& d,
                               long long work_cap = kDefaultWorkCap);

}  // namespace sqp
