#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sqp/util.hpp"

namespace sqp {

// Plane multigraph with +-1 edge weights, described by a rotation system.
// Darts: edge e owns darts 2e (its u end) and 2e+1 (its v end); rot[x] lists
// the darts ending at x in clockwise order.  Faces traced with the
// successor-of-twin rule then lie to the LEFT of each departing dart, the
// same convention the diagram face tracing uses.  No self-loops (the graphs
// here are bipartite).
struct PlaneWeightedGraph {
    struct Edge {
        int u = -1, v = -1;
        int w = +1;    // +1 or -1
        int tag = -1;  // originating crossing id, or -1 for synthetic edges
    };

    int nv = 0;
    std::vector<Edge> edges;
    std::vector<std::vector<int>> rot;

    int ne() const { return static_cast<int>(edges.size()); }
    int dart_vertex(int d) const { return (d & 1) ? edges[d >> 1].v : edges[d >> 1].u; }
    int dart_other(int d) const { return (d & 1) ? edges[d >> 1].u : edges[d >> 1].v; }
    int degree(int v) const { return static_cast<int>(rot[v].size()); }
};

// Faces of the rotation system.
struct GraphRegions {
    std::vector<std::vector<int>> walks;  // boundary darts, in traversal order
    std::vector<int> region_of;           // dart -> region index
    std::vector<int> weight;              // total edge weight along each walk

    int count() const { return static_cast<int>(walks.size()); }
    int length(int r) const { return static_cast<int>(walks[r].size()); }
};

// Structural check: every dart in exactly one rotation list, at its own
// vertex; no self-loops; weights +-1; Euler characteristic 2 per connected
// component (the rotation system is genuinely planar).
void validate_graph(const PlaneWeightedGraph& g);

GraphRegions graph_regions(const PlaneWeightedGraph& g);

// 2-coloring; throws reduction_invariant_error if an odd cycle exists.
// colour[v] in {0,1}; vertices of even index components coloured from 0.
std::vector<int> bipartition(const PlaneWeightedGraph& g);

std::vector<int> vertex_components(const PlaneWeightedGraph& g);

// Blocks of the graph.  Isolated vertices form no block.
struct Blocks {
    std::vector<int> block_of_edge;
    std::vector<int> cut_vertices;              // ascending
    std::vector<std::vector<int>> block_edges;  // edge ids per block
};
Blocks biconnected_blocks(const PlaneWeightedGraph& g);

// The subgraph carried by the given edges, rotations induced; vertices are
// renumbered in ascending order of their old ids.  old vertex = vmap[new].
PlaneWeightedGraph edge_subgraph(const PlaneWeightedGraph& g,
                                 const std::vector<int>& edge_ids,
                                 std::vector<int>* vmap = nullptr);

// Contracts edge e, merging its v endpoint into its u endpoint.  The two
// rotation lists are spliced at the deleted darts, which is what contracting
// in the plane does.  Vertices and edges are renumbered compactly (v removed,
// e removed); returns maps old->new when requested (-1 for removed).
PlaneWeightedGraph contract_edge(const PlaneWeightedGraph& g, int e,
                                 std::vector<int>* vertex_map = nullptr,
                                 std::vector<int>* edge_map = nullptr);

// Deletes an edge, keeping both endpoints.
PlaneWeightedGraph delete_edge(const PlaneWeightedGraph& g, int e,
                               std::vector<int>* edge_map = nullptr);

// Merges vertex b into vertex a across a common face: rot[a] is cut just
// after position cut_a (a corner of that face), rot[b] just after cut_b, and
// the lists are spliced.  Both corners must lie on one face for the result
// to stay planar; validated by the caller via Euler.
PlaneWeightedGraph merge_vertices(const PlaneWeightedGraph& g, int a, int cut_a,
                                  int b, int cut_b,
                                  std::vector<int>* vertex_map = nullptr);

// Adds a path of new positive edges from a to b through the face with the
// given corners: the first new dart is inserted just after position cut_a in
// rot[a], the last just after cut_b in rot[b]; interior path vertices are
// fresh.  k = number of edges (k >= 1); k-1 new vertices.
PlaneWeightedGraph insert_path(const PlaneWeightedGraph& g, int a, int cut_a,
                               int b, int cut_b, int k);

// position of every dart inside its rotation list: (vertex, index)
std::vector<std::pair<int, int>> rot_positions(const PlaneWeightedGraph& g);

// region-size profile: f[i] = number of regions whose boundary walk has
// length 2(i+1).  All boundary lengths are even on bipartite graphs.
std::vector<int> region_profile(const GraphRegions& r);

// true if a is strictly smaller than b at the highest index where they
// differ (trailing zeros ignored)
bool profile_less(const std::vector<int>& a, const std::vector<int>& b);

// Line format: `v <n>`, then `e <u> <v> <+1|-1> <tag>` per edge in order,
// then `rot <v> <e:side>...` per vertex.
std::string serialize_graph(const PlaneWeightedGraph& g);
PlaneWeightedGraph parse_graph(const std::string& text);

inline std::uint64_t graph_hash(const PlaneWeightedGraph& g) {
    return fnv1a64(serialize_graph(g));
}

}  // namespace sqp
