#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sqp/criterion.hpp"
#include "sqp/diagram.hpp"
#include "sqp/seifert.hpp"
#include "sqp/util.hpp"

namespace sqp {

// The four regions the two strand curves of a partial smoothing cut the
// plane into.  U1 and U2 have inconsistently oriented boundary (U1 is the
// unbounded one in the normalized drawing); O1 and O2 are the consistently
// oriented sides, O1 the region enclosed by s1 and O2 the one enclosed by
// s2.
enum class GenRegion : std::uint8_t { U1, U2, O1, O2 };
const char* region_name(GenRegion r);

// Partial smoothing of an almost-positive type II diagram: every crossing
// except the negative one (c_minus) and a parallel positive partner
// (c_plus) is resolved in the oriented manner.  The strands through the two
// kept crossings close up into two curves meeting exactly twice; s1 is the
// curve passing over at both.  Remaining circles and resolved crossings
// each live in one of the four regions.
struct GeneralizedSmoothing {
    Diagram base;
    int c_minus = -1, c_plus = -1;
    SmoothedMap m;  // full smoothing, rerooted so infinity lies in U1

    int k_under = -1, k_over = -1;  // circles carrying c_minus's two strands
    std::vector<int> s1_arcs, s2_arcs;  // arc labels per curve, in strand order
    std::map<int, int> gen_of_arc;      // arc -> generalized circle id

    // generalized circle ids: plain circles keep their SmoothedMap ids, the
    // two curves get the next two ids
    int s1_id() const { return static_cast<int>(m.circles.size()); }
    int s2_id() const { return s1_id() + 1; }

    std::vector<GenRegion> region_of_circle;    // per circle; k_under/k_over unused
    std::vector<GenRegion> region_of_crossing;  // per crossing; c_minus/c_plus unused
    std::vector<GenRegion> region_of_face;      // per diagram face

    int band_home = -1;              // smoothed region holding both kept bands
    int region_o1 = -1, region_o2 = -1;  // smoothed region ids behind O1/O2
    bool orientation_normalized = false;  // s1 clockwise, s2 counterclockwise

    bool plain(int circle) const { return circle != k_under && circle != k_over; }
    // generalized circle ids at the two band ends of crossing x
    int gen_under(int x) const;
    int gen_over(int x) const;
};

// Builds the partial smoothing.  The one-argument form marks the unique
// negative crossing and the lowest parallel positive partner.
GeneralizedSmoothing build_generalized(const Diagram& d, int c_minus, int c_plus);
GeneralizedSmoothing build_generalized(const Diagram& d);

// Invariants of the surface made of one disk per generalized circle and one
// ribbon per resolved crossing; the two kept crossings are realized by the
// s1 disk lying above the s2 disk, so they contribute no ribbon.  Euler
// characteristic lands two above the canonical surface and the boundary
// count matches it; both facts are re-checked and a mismatch is a hard
// internal error.
SurfaceInvariants sigma_prime_invariants(const GeneralizedSmoothing& gs);

// Slides crossing c across the kept crossing `over` (c_minus or c_plus).
// c must join s1 to s2 and share an empty bigon face with `over`; the
// surface is unchanged, only attachment positions move.
GeneralizedSmoothing swap_crossing(const GeneralizedSmoothing& gs, int c, int over);

// Contracts a circle with exactly two crossings hugging `over` into a
// single crossing between the curves on the far side of `over`; the
// inverse expands such a crossing back into a circle on the chosen side.
// Both keep the surface.
GeneralizedSmoothing swap_circle(const GeneralizedSmoothing& gs, int circle, int over);
GeneralizedSmoothing swap_circle_back(const GeneralizedSmoothing& gs, int crossing,
                                      int over, GenRegion side);

// True when the two resolved crossings join the same pair of generalized
// circles and bound an empty disk together with two boundary intervals,
// either directly or after sliding one of them across a kept crossing.
bool next_to_each_other(const GeneralizedSmoothing& gs, int c1, int c2);

// Terminal shape of the reduction: the irreducible diagrams D1..D8, or a
// configuration obtained from one of them by deleting circles or
// crossings.  Counts describe the lone curve-to-curve crossings per mixed
// region and the circles per oriented region; the signature is the
// canonical boundary walk used for recognition.
struct SpecialCaseId {
    std::string which;
    int u1 = 0, u2 = 0;
    int o1_circles = 0, o2_circles = 0;
    std::string signature;
};

struct Type2Move {
    enum class Kind { Split, Untwist, Murasugi, DropBand, AddBand };
    Kind kind{};
    int a = -1;  // split: kept piece; untwist/drop: crossing; murasugi: circle; add: arc
    int b = -1;  // murasugi: 1 = kept interior; drop: the retained twin; add: other arc
    std::uint64_t pre_hash = 0;          // hash of the diagram before the move
    std::vector<std::string> shed;       // positive summands split off, as PD text
};
const char* move_name(Type2Move::Kind k);

// Reduction record: starting diagram with its marked pair, the moves in
// order, and the recognized terminal shape.  Replay re-checks every
// precondition but never re-derives a choice.
struct Type2Trace {
    Diagram root;
    int c_minus = -1, c_plus = -1;
    SurfaceInvariants prime;  // of the root
    std::vector<Type2Move> moves;
    SpecialCaseId terminal;
};

// Applies, in order of preference: splitting off disconnected positive
// parts, untwisting nugatory crossings, splitting at a circle with
// non-empty interior and exterior, dropping one of two crossings that sit
// next to each other, and adding a coherent band between two circles that
// share a face.  Stops when none applies and the remaining diagram matches
// a terminal shape; anything else raises reduction_invariant_error.
Type2Trace reduce_type2(const GeneralizedSmoothing& gs,
                        long long work_cap = kDefaultWorkCap);
Type2Trace reduce_type2(const Diagram& d, long long work_cap = kDefaultWorkCap);

// Re-runs a trace against its own root, checking hashes, preconditions and
// the terminal shape.  Throws on any mismatch.
void replay_trace(const Type2Trace& t, long long work_cap = kDefaultWorkCap);

std::string serialize_trace(const Type2Trace& t);

// Constructs the irreducible diagram Di (1 <= i <= 8) as a plain diagram:
// the marked pair plus the fixed pattern of curve-to-curve crossings and
// two-crossing circles that blocks every reduction move.
Diagram special_case_diagram(int i);

}  // namespace sqp
