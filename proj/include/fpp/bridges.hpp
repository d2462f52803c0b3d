#pragma once

// Path-geometry machinery for optimal paths: monotone-direction
// classification, M-broken-bridge detection with the sequential selection
// scan, and the vertex mark sets used by the census experiments.
//
// An M-bridge is an axis-parallel lattice segment with fewer than 2M
// vertices. A bridge between two path vertices is "broken" for a path when
// the segment meets the path in its two endpoints only (no interior vertex
// of the segment on the path, no segment edge used by the path), so the
// path has to loop around it.

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include "fpp/lattice.hpp"
#include "fpp/weights.hpp"

namespace fpp {

enum class PathClass : uint8_t { northeast, southeast, neither };

// Monotone-direction classification, insensitive to traversal direction:
// northeast when all steps lie in {+x,+y} (or all in {-x,-y}), southeast
// when all steps lie in {+x,-y} (or all in {-x,+y}). Paths with zero or one
// edge classify as northeast (the quantifier is vacuous or one-sided).
PathClass classify_ne_se(const LatticePath& path);

struct BridgeSegment {
    Vertex u;
    Vertex v;
    Orientation orient = Orientation::horizontal;
    int vertex_count = 0;  // l1(u,v) + 1, always < 2M

    // Lattice vertices of the segment, from u to v inclusive.
    std::vector<Vertex> segment_vertices() const;
    // Canonical edges of the segment.
    std::vector<EdgeId> segment_edges() const;
};

struct BrokenBridge {
    BridgeSegment bridge;
    LatticePath loop;        // subpath of gamma from u to v
    size_t u_index = 0;      // positions in the analyzed path
    size_t v_index = 0;
};

struct BrokenBridgeList {
    std::vector<BrokenBridge> items;

    size_t size() const { return items.size(); }
    bool empty() const { return items.empty(); }
};

std::string to_json(const BrokenBridgeList& list);

// Sequential selection of the peculiar broken bridges of `path`:
// scan from the start; at the first vertex admitting an M-broken bridge for
// the remaining part of the path, resolve multiplicity by taking the
// partner vertex met first along the path; restart the scan from that
// partner. The bridge condition is always evaluated against the remaining
// part, mirroring the construction.
BrokenBridgeList find_broken_bridges(const LatticePath& path, int M);

struct PathMarks {
    std::vector<Vertex> d;      // endpoints of path edges with t(e) > 1
    std::vector<Vertex> s_m;    // bridge endpoints u_i, v_i
    std::vector<Vertex> d_z;    // endpoints of path edges with t(e) > z
    std::vector<Vertex> s_m_z;  // endpoints of bridges containing a z+ edge
};

std::string to_json(const PathMarks& marks);

// D / S_M / D(z,.) / S_M(z,.) of a path. z > 1 is the weight threshold; the
// bridge list is recomputed unless supplied.
PathMarks mark_vertices(const LatticePath& path, const std::function<double(EdgeId)>& weight,
                        int M, double z);
PathMarks mark_vertices(const LatticePath& path, const std::function<double(EdgeId)>& weight,
                        int M, double z, const BrokenBridgeList& bridges);

struct CensusCounts {
    int64_t marked = 0;    // |B(m) ∩ (S_M ∪ D)|
    int64_t marked_z = 0;  // |B(m) ∩ (S_M_z ∪ D_z)|
};

// Counts of marked vertices inside the centered box [-m,m]^2. The two mark
// families are deduplicated as vertex sets before counting.
CensusCounts census(const PathMarks& marks, int m);

// --- structural verification -------------------------------------------
//
// Exact checks run on every bridge list an experiment produces. They return
// an empty string on success and a diagnostic on the first violation.

// Bridge condition against the relevant remaining part: for bridge i the
// segment meets the path piece from v_{i-1} (path start for i = 0) onward
// exactly in {u_i, v_i}, as a point set (interior vertices and edges both
// excluded), and the vertex count is below 2M.
std::string check_bridge_definition(const LatticePath& path, const BrokenBridgeList& list, int M);

// The piece between consecutive selections carries no bridge of its own:
// re-scanning the remainder from v_{i-1} finds no admissible bridge before
// u_i, and the scan's first find is exactly (u_i, v_i). After the last
// selection the remainder admits none.
std::string check_no_skipped_bridges(const LatticePath& path, const BrokenBridgeList& list, int M);

// Loops are pairwise edge-disjoint and so are the bridges.
std::string check_pairwise_disjoint(const BrokenBridgeList& list);

// No vertex of the path lies strictly inside the Jordan loop formed by the
// detour and its bridge (exact integer point-in-polygon).
std::string check_loop_interiors_empty(const LatticePath& path, const BrokenBridgeList& list);

// Every bridge of an optimal path has an edge with t(e) > 1 (only valid for
// geodesic inputs).
std::string check_bridges_have_heavy_edge(const BrokenBridgeList& list,
                                          const std::function<double(EdgeId)>& weight);

// All checks above in sequence (heavy-edge check only when `geodesic`).
std::string verify_bridge_structure(const LatticePath& path, const BrokenBridgeList& list, int M,
                                    const std::function<double(EdgeId)>& weight, bool geodesic);

}  // namespace fpp
