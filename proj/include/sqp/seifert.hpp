#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sqp/diagram.hpp"
#include "sqp/graph.hpp"

namespace sqp {

// A Seifert circle.  arcs[] in strand-traversal order, rotated so the
// smallest label comes first; between arcs[i] and arcs[i+1] the circle passes
// crossing xing[i], carrying either the under-in/over-out pair
// (as_under[i] = 1) or the over-in/under-out pair.  Crossing-free loop
// components are circles with a single arc and no transitions.
struct Circle {
    std::vector<int> arcs;
    std::vector<int> xing;
    std::vector<std::uint8_t> as_under;

    int transitions() const { return static_cast<int>(xing.size()); }
};

// The diagram after oriented smoothing: circles, the regions they cut the
// plane into, and a rooted region tree per map component.  Regions are
// classes of diagram faces joined across the smoothed-out crossings.
struct SmoothedMap {
    Diagram d;
    FaceSet fs;
    std::vector<Circle> circles;
    std::vector<int> circle_of_arc_end;  // dart id (4x+s) -> circle
    std::vector<int> loop_circle;        // loop index -> circle

    // per crossing: the circle through each side and the transition index
    // within that circle's lists
    struct Incidence {
        int cu = -1, pos_u = -1;  // under-in/over-out side
        int co = -1, pos_o = -1;  // over-in/under-out side
    };
    std::vector<Incidence> inc;

    // regions of the circle-family complement
    std::vector<int> region_of_face;
    int region_count = 0;
    std::vector<int> comp_of_region;
    std::vector<int> comp_of_circle;
    std::vector<int> left_region, right_region;  // per circle, along traversal
    std::vector<int> band_region;                // per crossing

    // rooted region tree (per component; parents -1 at roots)
    std::vector<int> outer_region;          // per component
    std::vector<int> region_parent;         // per region
    std::vector<int> region_parent_circle;  // circle crossed towards parent
    std::vector<int> region_degree;         // tree degree
    std::vector<int> inner_region;          // per circle: its far-side region

    int region_of_arc_left(int x, int s) const;  // region left of dart (x,s)
    bool ccw(int k) const { return inner_region[k] == left_region[k]; }
};

// circle containment derived from the rooted region tree
struct NestingForest {
    std::vector<int> parent;  // per circle: tightest enclosing circle or -1
    std::vector<int> depth;   // nesting depth (0 = not enclosed)
};

// Seifert graph: one vertex per circle, one edge per crossing.  Edge u-ends
// sit on the circle that goes under into the crossing.  end_interior marks
// edge ends whose band attaches on the interior side of its circle.  When
// plane is true (every interior empty) the rotation system is validated
// planar; otherwise rot still records the attachment order along each
// circle but need not embed.
struct SeifertGraph {
    PlaneWeightedGraph g;
    std::vector<std::array<std::uint8_t, 2>> end_interior;
    bool plane = false;
};

struct SurfaceInvariants {
    int euler = 0;
    int betti = 0;
    int boundary = 0;
    int split_parts = 0;
    int genus_twice = 0;

    double genus() const { return genus_twice / 2.0; }
    friend bool operator==(const SurfaceInvariants&, const SurfaceInvariants&) = default;
};

// Smooths every crossing in the oriented manner and derives circles, regions
// and the region tree.  The initial root of each component is the region
// containing its lowest-numbered face (the drawing's outer region is not
// part of PD data; it is an explicit re-rootable choice).
SmoothedMap seifert_circles(const Diagram& d);

// Re-roots the component containing the given region.
void reroot(SmoothedMap& m, int region);

// Chooses roots so that no circle with a non-empty interior bounds an empty
// exterior: each component with at least two circles gets rooted at a region
// touching more than one circle.  Idempotent; keeps valid roots.
SmoothedMap move_infinity(const SmoothedMap& m);

// no other circle of the component strictly inside / outside k
bool interior_empty(const SmoothedMap& m, int k);
bool exterior_empty(const SmoothedMap& m, int k);

// a strictly contains b (same component only; split components are drawn
// side by side and never nest)
bool nested(const SmoothedMap& m, int a, int b);

NestingForest nesting_forest(const SmoothedMap& m);

SeifertGraph seifert_graph(const SmoothedMap& m);

// closed strand curves of the diagram (= boundary components of the surface)
int link_components(const Diagram& d);

SurfaceInvariants surface_invariants(const Diagram& d);

}  // namespace sqp
