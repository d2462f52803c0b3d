#pragma once

// Exact passage times and unique tie-broken optimal paths over finite
// regions, plus the region-certification loop that stands in for the
// infinite lattice and the small exhaustive oracle.
//
// All weights are >= 1, so a label-setting Dijkstra sweep is exact and every
// geodesic is self-avoiding. Passage times are accumulated in path order
// from the source, which keeps floating-point sums reproducible and lets the
// brute-force oracle match them bit for bit.

#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpp/lattice.hpp"
#include "fpp/weights.hpp"

namespace fpp {

struct PassageResult {
    double time = 0.0;
    LatticePath path;
    Region region_used;
    int boundary_margin = 0;  // min distance from path to the region boundary
};

std::string to_json(const PassageResult& r);

class RegionCertificationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Distance field of a full Dijkstra sweep from `src` over `region`.
// The final labels are the exact minima over in-region paths of the
// left-to-right floating-point sums, independent of heap tie order.
template <class WeightFn>
std::vector<double> dijkstra_field(const WeightFn& weight, Vertex src, const Region& region,
                                   double stop_beyond = kInf) {
    const int64_t w = region.width();
    const int64_t n = region.vertex_count();
    std::vector<double> dist(size_t(n), kInf);
    auto index = [&](Vertex v) { return size_t((v.y - region.y_min) * w + (v.x - region.x_min)); };

    using Item = std::pair<double, int64_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[index(src)] = 0.0;
    heap.emplace(0.0, int64_t(index(src)));

    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    while (!heap.empty()) {
        auto [d, idx] = heap.top();
        heap.pop();
        if (d > dist[size_t(idx)]) continue;  // stale entry
        if (d > stop_beyond) break;
        Vertex u{int(idx % w) + region.x_min, int(idx / w) + region.y_min};
        for (int k = 0; k < 4; ++k) {
            Vertex v{u.x + dx[k], u.y + dy[k]};
            if (!region.contains(v)) continue;
            double nd = d + weight(edge_between(u, v));
            size_t vi = index(v);
            if (nd < dist[vi]) {
                dist[vi] = nd;
                heap.emplace(nd, int64_t(vi));
            }
        }
    }
    return dist;
}

// Tie-break key for choosing among optimal predecessors: prefer the vertex
// closer to the X-axis, then lower y, then lower x, then the horizontal
// edge. Total on the four neighbors of any vertex.
inline bool pred_key_less(Vertex a, Orientation oa, Vertex b, Orientation ob) {
    auto key = [](Vertex v, Orientation o) {
        return std::tuple(std::abs(v.y), v.y, v.x, int(o));
    };
    return key(a, oa) < key(b, ob);
}

// Walk the distance field backward from `target`, always stepping to the
// tie-break-minimal optimal predecessor. Weights >= 1 force strictly
// decreasing labels, so the walk terminates and the path is self-avoiding.
template <class WeightFn>
LatticePath extract_path(const WeightFn& weight, const std::vector<double>& dist, Vertex src,
                         Vertex target, const Region& region) {
    const int64_t w = region.width();
    auto index = [&](Vertex v) { return size_t((v.y - region.y_min) * w + (v.x - region.x_min)); };

    LatticePath path;
    Vertex cur = target;
    path.vertices.push_back(cur);
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    while (!(cur == src)) {
        double dcur = dist[index(cur)];
        bool found = false;
        Vertex best{};
        Orientation best_o = Orientation::horizontal;
        for (int k = 0; k < 4; ++k) {
            Vertex u{cur.x + dx[k], cur.y + dy[k]};
            if (!region.contains(u)) continue;
            double du = dist[index(u)];
            if (du == kInf) continue;
            EdgeId e = edge_between(u, cur);
            if (du + weight(e) == dcur) {
                if (!found || pred_key_less(u, e.orient, best, best_o)) {
                    best = u;
                    best_o = e.orient;
                    found = true;
                }
            }
        }
        if (!found) throw std::logic_error("extract_path: no optimal predecessor");
        cur = best;
        path.vertices.push_back(cur);
    }
    std::reverse(path.vertices.begin(), path.vertices.end());
    return path;
}

inline int path_margin(const LatticePath& p, const Region& r) {
    int m = std::numeric_limits<int>::max();
    for (const auto& v : p.vertices) m = std::min(m, r.margin_of(v));
    return m;
}

}  // namespace detail

// Minimal passage time and the unique selected optimal path from u to v,
// restricted to paths inside `region`.
template <class WeightFn>
PassageResult passage_time(const WeightFn& weight, Vertex u, Vertex v, const Region& region) {
    if (!region.contains(u) || !region.contains(v))
        throw std::invalid_argument("passage_time: endpoint outside region");
    PassageResult res;
    res.region_used = region;
    if (u == v) {
        res.path.vertices = {u};
        res.boundary_margin = region.margin_of(u);
        return res;
    }
    auto dist = detail::dijkstra_field(weight, u, region);
    double d = dist[size_t((int64_t(v.y) - region.y_min) * region.width() + (v.x - region.x_min))];
    if (d == detail::kInf) throw std::logic_error("passage_time: target unreachable");
    res.time = d;
    res.path = detail::extract_path(weight, dist, u, v, region);
    res.boundary_margin = detail::path_margin(res.path, region);
    return res;
}

inline PassageResult passage_time(const Configuration& c, Vertex u, Vertex v, const Region& region) {
    return passage_time<Configuration>(c, u, v, region);
}

// Point-to-line passage time from u to the column {x = line_x}. The hit
// vertex is unique: among minimal-time line vertices the one closest to the
// X-axis (then lowest y) is selected, and the resulting path meets the line
// only at its final vertex.
template <class WeightFn>
PassageResult point_to_line(const WeightFn& weight, Vertex u, int line_x, const Region& region) {
    if (u.x == line_x) throw std::invalid_argument("point_to_line: point already on line");
    if (!region.contains(u) || line_x < region.x_min || line_x > region.x_max)
        throw std::invalid_argument("point_to_line: line or point outside region");

    auto dist = detail::dijkstra_field(weight, u, region);
    const int64_t w = region.width();
    auto index = [&](Vertex v) { return size_t((v.y - region.y_min) * w + (v.x - region.x_min)); };

    bool found = false;
    Vertex hit{};
    double best = detail::kInf;
    for (int y = region.y_min; y <= region.y_max; ++y) {
        Vertex v{line_x, y};
        double d = dist[index(v)];
        if (d == detail::kInf) continue;
        auto key = std::tuple(d, std::abs(v.y), v.y);
        if (!found || key < std::tuple(best, std::abs(hit.y), hit.y)) {
            best = d;
            hit = v;
            found = true;
        }
    }
    if (!found) throw std::logic_error("point_to_line: line unreachable");
    PassageResult res;
    res.time = best;
    res.path = detail::extract_path(weight, dist, u, hit, region);
    res.region_used = region;
    res.boundary_margin = detail::path_margin(res.path, region);
    return res;
}

inline PassageResult point_to_line(const Configuration& c, Vertex u, int line_x, const Region& region) {
    return point_to_line<Configuration>(c, u, line_x, region);
}

// Region certification: doubles the margin until the geodesic keeps a
// positive distance from the boundary and its time is unchanged by one
// further doubling. Weights >= 1 make detours cost at least their length,
// so a stable interior geodesic is a geodesic of every larger region.
template <class WeightFn>
std::pair<Region, PassageResult> auto_region(const WeightFn& weight, Vertex u, Vertex v,
                                             int initial_margin, int margin_cap = -1) {
    if (initial_margin < 1) throw std::invalid_argument("auto_region: initial_margin must be >= 1");
    if (margin_cap < 0) margin_cap = 8 * std::max(l1_dist(u, v), 8);
    int margin = initial_margin;
    if (margin > margin_cap)
        throw RegionCertificationError("auto_region: margin cap below initial margin");
    PassageResult at_margin = passage_time(weight, u, v, box_around(u, v, margin));
    while (true) {
        int next = margin * 2;
        if (next > margin_cap)
            throw RegionCertificationError("auto_region: region certification failed (margin cap " +
                                           std::to_string(margin_cap) + " exceeded)");
        PassageResult at_next = passage_time(weight, u, v, box_around(u, v, next));
        if (at_margin.boundary_margin >= 1 && at_next.time == at_margin.time)
            return {at_margin.region_used, at_margin};
        margin = next;
        at_margin = at_next;
    }
}

inline std::pair<Region, PassageResult> auto_region(const Configuration& c, Vertex u, Vertex v,
                                                    int initial_margin, int margin_cap = -1) {
    return auto_region<Configuration>(c, u, v, initial_margin, margin_cap);
}

// Same certification loop for point-to-line times. The region is clipped at
// the target column (an optimal path meets the line only at its last vertex
// anyway); the margin grows on the three remaining sides.
template <class WeightFn>
std::pair<Region, PassageResult> auto_region_to_line(const WeightFn& weight, Vertex u, int line_x,
                                                     int initial_margin, int margin_cap = -1) {
    if (initial_margin < 1) throw std::invalid_argument("auto_region: initial_margin must be >= 1");
    if (margin_cap < 0) margin_cap = 8 * std::max(std::abs(line_x - u.x), 8);
    int margin = initial_margin;
    if (margin > margin_cap)
        throw RegionCertificationError("auto_region: margin cap below initial margin");
    auto make_region = [&](int m) {
        Region r{std::min(u.x, line_x), std::max(u.x, line_x), u.y - m, u.y + m};
        if (line_x > u.x)
            r.x_min -= m;
        else
            r.x_max += m;
        return r;
    };
    // Clearance from the three non-line sides; the final line vertex is
    // allowed to sit on the boundary.
    auto interior = [&](const PassageResult& res) {
        const Region& r = res.region_used;
        for (size_t i = 0; i + 1 < res.path.vertices.size(); ++i) {
            Vertex p = res.path.vertices[i];
            int m = std::min(p.y - r.y_min, r.y_max - p.y);
            m = std::min(m, line_x > u.x ? p.x - r.x_min : r.x_max - p.x);
            if (m < 1) return false;
        }
        return true;
    };
    PassageResult at_margin = point_to_line(weight, u, line_x, make_region(margin));
    while (true) {
        int next = margin * 2;
        if (next > margin_cap)
            throw RegionCertificationError("auto_region: region certification failed (margin cap " +
                                           std::to_string(margin_cap) + " exceeded)");
        PassageResult at_next = point_to_line(weight, u, line_x, make_region(next));
        if (interior(at_margin) && at_next.time == at_margin.time)
            return {at_margin.region_used, at_margin};
        margin = next;
        at_margin = at_next;
    }
}

// Exhaustive minimum over all self-avoiding paths from u to v inside
// `region`; test oracle, regions of at most 20 vertices. Sums are
// accumulated in path order from u, matching passage_time exactly.
template <class WeightFn>
double brute_force_passage(const WeightFn& weight, Vertex u, Vertex v, const Region& region) {
    if (region.vertex_count() > 20)
        throw std::invalid_argument("brute_force_passage: region larger than 20 vertices");
    if (!region.contains(u) || !region.contains(v))
        throw std::invalid_argument("brute_force_passage: endpoint outside region");
    if (u == v) return 0.0;

    double best = detail::kInf;
    std::vector<Vertex> stack_path{u};
    std::vector<char> used(size_t(region.vertex_count()), 0);
    auto index = [&](Vertex p) {
        return size_t((int64_t(p.y) - region.y_min) * region.width() + (p.x - region.x_min));
    };
    used[index(u)] = 1;

    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    auto dfs = [&](auto&& self, Vertex cur, double t) -> void {
        if (t >= best) return;  // weights >= 0: partial sums only grow
        if (cur == v) {
            best = t;
            return;
        }
        for (int k = 0; k < 4; ++k) {
            Vertex nxt{cur.x + dx[k], cur.y + dy[k]};
            if (!region.contains(nxt) || used[index(nxt)]) continue;
            used[index(nxt)] = 1;
            self(self, nxt, t + weight(edge_between(cur, nxt)));
            used[index(nxt)] = 0;
        }
    };
    dfs(dfs, u, 0.0);
    if (best == detail::kInf) throw std::logic_error("brute_force_passage: target unreachable");
    return best;
}

inline double brute_force_passage(const Configuration& c, Vertex u, Vertex v, const Region& region) {
    return brute_force_passage<Configuration>(c, u, v, region);
}

}  // namespace fpp
