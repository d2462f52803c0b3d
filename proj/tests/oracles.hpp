#pragma once

// Test-only oracles, independent of the implementation paths they check:
// exhaustive self-avoiding-walk enumeration, northeast 1-path enumeration,
// and a direct edge-scan for the level-1 right edge.

#include <functional>
#include <optional>
#include <vector>

#include "fpp/lattice.hpp"
#include "fpp/oriented.hpp"
#include "fpp/weights.hpp"

namespace oracles {

using fpp::LatticePath;
using fpp::Vertex;

// Enumerate every self-avoiding lattice path starting at `start` with at
// most `max_vertices` vertices (including the single-vertex path) and call
// `visit` on each.
inline void enumerate_saws(Vertex start, int max_vertices,
                           const std::function<void(const LatticePath&)>& visit) {
    LatticePath path;
    path.vertices.push_back(start);
    std::vector<Vertex> stack{start};
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    auto rec = [&](auto&& self) -> void {
        visit(path);
        if (int(path.vertices.size()) >= max_vertices) return;
        Vertex cur = path.vertices.back();
        for (int k = 0; k < 4; ++k) {
            Vertex nxt{cur.x + dx[k], cur.y + dy[k]};
            bool used = false;
            for (const auto& v : path.vertices)
                if (v == nxt) used = true;
            if (used) continue;
            path.vertices.push_back(nxt);
            self(self);
            path.vertices.pop_back();
        }
    };
    rec(rec);
}

// All northeast 1-paths from u to the column {x = target_x} inside the
// region, by direct search over the two monotone steps.
inline void enumerate_ne_one_paths(const fpp::Configuration& config, Vertex u, int target_x,
                                   const fpp::Region& region,
                                   const std::function<void(const LatticePath&)>& visit) {
    LatticePath path;
    path.vertices.push_back(u);
    auto rec = [&](auto&& self) -> void {
        Vertex cur = path.vertices.back();
        if (cur.x == target_x) {
            visit(path);
            return;
        }
        Vertex east{cur.x + 1, cur.y};
        if (region.contains(east) &&
            config.weight_at({cur.x, cur.y, fpp::Orientation::horizontal}) == 1.0) {
            path.vertices.push_back(east);
            self(self);
            path.vertices.pop_back();
        }
        Vertex north{cur.x, cur.y + 1};
        if (region.contains(north) &&
            config.weight_at({cur.x, cur.y, fpp::Orientation::vertical}) == 1.0) {
            path.vertices.push_back(north);
            self(self);
            path.vertices.pop_back();
        }
    };
    rec(rec);
}

// Level-1 right edge by direct enumeration of the open edges out of the
// half-line source, scanning as far left as the evolution window reaches.
inline int64_t brute_right_edge_level1(const fpp::OrientedConfig& oc, int scan_depth = 300) {
    int64_t best = fpp::kRightEdgeDead;
    for (int64_t x = 0; x >= -scan_depth; --x) {
        if (oc.open_edge(x, 0, +1)) best = std::max(best, x + 1);
        if (oc.open_edge(x, 0, -1)) best = std::max(best, x - 1);
    }
    return best;
}

// Exact mean of the level-1 right edge for openness p, from the two
// independent geometric scans (up-right edges give 1 - G_R, up-left edges
// give -1 - G_L, and r_1 is their maximum):
//   E r_1 = 1 - q/p + q^3 / (p (1 + q)),   q = 1 - p.
inline double exact_mean_r1(double p) {
    double q = 1.0 - p;
    return 1.0 - q / p + q * q * q / (p * (1.0 + q));
}

// One simple deterministic pseudo-random stream for test instance choices.
struct TestRng {
    uint64_t state;
    explicit TestRng(uint64_t seed) : state(seed) {}
    uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        return fpp::mix64(state);
    }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + int(next() % uint64_t(hi - lo + 1));
    }
    double uniform() { return fpp::uniform_from_bits(next()); }
};

}  // namespace oracles
