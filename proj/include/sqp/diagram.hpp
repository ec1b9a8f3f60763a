#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "sqp/util.hpp"

namespace sqp {

// A crossing in PD notation.  s[0..3] are the arc labels in rotational order
// around the crossing, starting at the slot where the under-strand enters.
// The under-strand leaves at slot 2; the over-strand occupies slots 1 and 3.
// over_in records which of those two slots the over-strand enters at, which
// is exactly the crossing sign: +1 when it enters at slot 1.
struct Crossing {
    std::array<int, 4> s{};
    int over_in = 1;  // 1 or 3

    int sign() const { return over_in == 1 ? +1 : -1; }
    // slot carrying an inbound strand end?
    bool in(int slot) const { return slot == 0 || slot == over_in; }
};

// A link diagram: crossings plus any crossing-free unknot components
// ("loops", each a single closed arc).  Equality compares the PD content;
// over_in is derived data.
struct Diagram {
    std::vector<Crossing> xs;
    std::vector<int> loops;

    int n() const { return static_cast<int>(xs.size()); }

    friend bool operator==(const Diagram& a, const Diagram& b) {
        if (a.xs.size() != b.xs.size() || a.loops != b.loops) return false;
        for (size_t i = 0; i < a.xs.size(); ++i)
            if (a.xs[i].s != b.xs[i].s) return false;
        return true;
    }
};

// Both occurrences of an arc label among crossing slots: (crossing, slot),
// in scan order.
struct ArcEnds {
    std::array<std::pair<int, int>, 2> at;
    int count = 0;
};

// label -> its two ends.  Loops do not appear.
std::map<int, ArcEnds> arc_table(const Diagram& d);

// Faces of the underlying 4-valent plane map, one orbit list per face.
// Darts are departures (crossing x, slot s), encoded 4*x+s; the face lies to
// the left of travel.  Crossing-free loop components contribute two dartless
// faces each.  The empty diagram has the single plane face.
struct FaceSet {
    std::vector<std::vector<int>> faces;       // dart ids per face
    std::vector<int> face_of;                  // dart id -> face index
    std::vector<int> comp_of_face;             // face -> map component
    std::vector<int> comp_of_crossing;         // crossing -> map component
    std::vector<int> comp_of_loop;             // loop index -> map component
    std::vector<std::array<int, 2>> loop_faces;  // per loop: its two faces
    int components = 0;

    int count() const { return static_cast<int>(faces.size()); }

    // region between slot t and slot t+1 at crossing x
    int corner(int x, int t) const { return face_of[4 * x + (t + 1) % 4]; }
    // face left of the dart departing (x, s)
    int left_of_dart(int x, int s) const { return face_of[4 * x + s]; }
};

// Parses PD text: whitespace-separated `X(a,b,c,d)` tokens with positive
// integer arc labels, optional `O(a)` loop tokens, `#` comments to end of
// line.  Derives strand orientations and validates the result.
Diagram parse_pd(const std::string& text);

// Inverse of parse_pd up to orientation re-derivation (the text determines
// the PD content; orientations are recomputed on parse).
std::string serialize_pd(const Diagram& d);

// Fills over_in for every crossing by propagating strand directions from the
// under-slots.  Components that never go under anywhere are genuinely
// ambiguous; they get a deterministic direction (lowest-id unresolved
// crossing is assigned over_in = 1, then propagation resumes).
void derive_orientations(Diagram& d);

// Checks that the recorded orientations are consistent (each arc one head,
// one tail).  Throws orientation_error.
void check_orientations(const Diagram& d);

// Structural validation: label multiplicities, orientation consistency, and
// Euler characteristic 2 for every map component (catches non-planar data).
void validate(const Diagram& d);

// Switches every crossing (over <-> under) keeping the projection and the
// strand orientations.  Every sign flips.
Diagram mirror(const Diagram& d);

// Connected components of the diagram, crossing order preserved.  Loops
// become singleton diagrams.
std::vector<Diagram> split_components(const Diagram& d);

FaceSet faces(const Diagram& d);

}  // namespace sqp
