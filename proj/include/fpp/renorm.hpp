#pragma once

// Square/strip renormalization of optimal-path prefixes: M-squares B_M(w),
// vertical M-strips, the fattened square set of a prefix, the surgery walk
// that shortcuts every detour loop through its bridge, the bad/good strip
// taxonomy with its flat-strip count, and the 49-family census of 7-spaced
// M-squares holding marked vertices.

#include <array>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "fpp/bridges.hpp"
#include "fpp/lattice.hpp"

namespace fpp {

// B_M(w) = [M w.x, M w.x + M) x [M w.y, M w.y + M); half-open, lower and
// left boundaries included.
struct SquareIndex {
    int wx = 0;
    int wy = 0;
    friend bool operator==(const SquareIndex&, const SquareIndex&) = default;
    friend auto operator<=>(const SquareIndex&, const SquareIndex&) = default;
};

inline int floor_div(int a, int b) {
    int q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

inline SquareIndex square_of(Vertex v, int M) { return {floor_div(v.x, M), floor_div(v.y, M)}; }

enum class StripClass : uint8_t { bad, good_long, good_short_flat, good_short_nonflat };

const char* strip_class_name(StripClass c);

struct StripInfo {
    int w1 = 0;
    StripClass cls = StripClass::bad;
    bool has_crossing = false;  // good strips always do; bad strips are not crossed
    Vertex v1{}, v2{};          // crossing endpoints on the strip's left/right columns
    int crossing_vertices = 0;
    // First vertex index of the crossing within the surgery walk.
    size_t crossing_begin = 0;
};

// Prefix/suffix split at the first vertex on the line {x = m}; the shared
// vertex appears in both pieces.
std::pair<LatticePath, LatticePath> split_at_line(const LatticePath& path, int m);

// Fattened prefix: the set of M-squares meeting the prefix vertex set.
std::set<SquareIndex> fatten(const LatticePath& prefix, int M);

// The fattened set of a connected path is connected under 8-neighborhood.
bool eight_connected(const std::set<SquareIndex>& squares);

// Surgery walk: follow the path from its start, but traverse each selected
// bridge segment instead of its detour loop, stopping at the first contact
// with {x = m} (which may happen on a bridge segment). A loop that spans the
// prefix end and whose bridge stays left of the line is kept as-is, so the
// walk never outgrows the prefix. The result is a connected walk, not
// necessarily self-avoiding.
LatticePath gamma_m(const LatticePath& path, const BrokenBridgeList& bridges, int m);

// Strip taxonomy over the strips strictly inside {0 < x < m}. A strip is bad
// when it, or one of its two neighbors on either side, contains a vertex of
// B(m) ∩ (S_M ∪ D); on good strips the first complete left-to-right
// crossing of the surgery walk is selected and classified long/short and
// flat/nonflat against the slope threshold tan_theta1 - delta1.
std::vector<StripInfo> classify_strips(const LatticePath& surgery, const PathMarks& marks, int M,
                                       int m, double tan_theta1, double delta1);

struct RenormReport {
    int M = 0, m = 0, n = 0;
    double z = 0.0, tan_theta1 = 0.0, delta1 = 0.0;
    // Prefix reached y = ±m strictly before any contact with x = ±m; the
    // vertical-strip analysis is then inapplicable and classification-based
    // assertions are skipped (a horizontal-strip variant would be needed).
    bool exits_top_bottom_first = false;
    std::vector<StripInfo> strips;
    int flat_count = 0;  // good-short-flat strips
    int64_t fattened_count = 0;
    int64_t prefix_vertices = 0;
    int64_t census_box = 0;    // |B(m) ∩ (S_M ∪ D)|
    int64_t census_box_z = 0;  // |B(m) ∩ (S_M_z ∪ D_z)|
    std::array<int64_t, 49> family_counts{};  // R_M(q_s, m, n)
};

// Census of the 49 families of 7-spaced M-squares: family_counts[s] is the
// number of squares congruent to shift q_s (componentwise mod 7) containing
// at least one vertex of B(m) ∩ (S_M_z ∪ D_z).
std::array<int64_t, 49> census_49(const PathMarks& marks, int M, int m);

// Shift q_s of family s, in {-3..3}^2 (s = 0..48, row-major).
SquareIndex family_shift(int s);

RenormReport build_renorm_report(const LatticePath& path, const BrokenBridgeList& bridges,
                                 const PathMarks& marks, int M, int m, int n, double z,
                                 double tan_theta1, double delta1);

// Exact invariants of a report; empty string when all hold:
//  - sum_s R_M(q_s) * M^2 >= |B(m) ∩ (S_M_z ∪ D_z)|
//  - fattened count * M^2 >= prefix vertex count, and >= m/M squares
//  - fattened set is 8-connected
//  - every bridge segment fits in the 7M-square around its u-endpoint square
std::string verify_renorm_invariants(const RenormReport& report, const LatticePath& prefix,
                                     const BrokenBridgeList& bridges);

// On runs that exit through x = ±m first, every good-strip crossing must be
// a 1-path. Only meaningful for geodesic inputs.
std::string check_good_crossings_are_one_paths(const RenormReport& report,
                                               const LatticePath& surgery,
                                               const std::function<double(EdgeId)>& weight);

// Every vertex of `window` is covered by exactly one 7M-square of each of
// the 49 families; empty string when the tiling holds.
std::string check_family_tiling(const Region& window, int M);

std::string to_json(const RenormReport& report);
std::string strips_to_csv(const RenormReport& report);
std::string census_to_csv(const RenormReport& report);

}  // namespace fpp
