#pragma once

// The rotated oriented-percolation lattice: levels n = 0,1,2,... with
// directed edges from (x, n) to (x-1, n+1) and (x+1, n+1), each open
// independently with probability p. Tracks the reachability set of the
// half-line source (-inf, 0] and its right edge r_n, the two-parameter
// restart r_{m,n}, and the lowest northeast 1-path of a weight field.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fpp/geodesics.hpp"
#include "fpp/lattice.hpp"
#include "fpp/stats.hpp"
#include "fpp/weights.hpp"

namespace fpp {

struct OrientedConfig {
    double p = 0.5;
    uint64_t master_seed = 0;
    uint32_t replicate_index = 0;

    OrientedConfig() = default;
    OrientedConfig(double p_, uint64_t seed, uint32_t replicate)
        : p(p_), master_seed(seed), replicate_index(replicate) {
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("oriented: p outside [0,1]");
        base_ = mix64(mix64(seed + 0x9e3779b97f4a7c15ull) ^
                      mix64(uint64_t(replicate) * 0xd1342543de82ef95ull + 0x9f4a7c15ee6b2807ull));
    }

    // Uniform variate of the directed edge from (x, level) to (x+dir, level+1),
    // dir = +1 (up-right) or -1 (up-left). Coupled monotonically in p.
    double edge_uniform(int64_t x, int level, int dir) const {
        uint64_t k1 = (uint64_t(uint32_t(int32_t(x))) << 32) | uint32_t(level);
        uint64_t k2 = (dir > 0 ? 0x8000000000000000ull : 0x4000000000000000ull) + 0x94d049bb133111ebull;
        return uniform_from_bits(mix64(mix64(base_ ^ k1) + k2));
    }
    bool open_edge(int64_t x, int level, int dir) const { return edge_uniform(x, level, dir) < p; }

  private:
    uint64_t base_ = 0;
};

// -inf sentinel for the right edge; kept distinct from any attainable value
// so arithmetic assertions stay honest.
inline constexpr int64_t kRightEdgeDead = INT64_MIN;

struct RightEdgeTrace {
    std::vector<int64_t> values;  // r_0 .. r_n, kRightEdgeDead = -inf
    // True when every finite value is certified unaffected by the finite
    // tracking window (influence from truncated far-left sites stays below
    // the recorded right edge at every level).
    bool certified = true;

    int64_t r(size_t level) const { return values.at(level); }
    bool dead(size_t level) const { return values.at(level) == kRightEdgeDead; }
};

std::string trace_to_csv(const RightEdgeTrace& trace);

// Level-by-level evolution of the half-line reachability set, tracked on a
// window of width about 4n below the running right edge; r_k is exact for
// every k <= n whenever `certified` holds (failures are detectable, not
// silent).
RightEdgeTrace evolve_right_edge(const OrientedConfig& oc, int n);

// Two-parameter right edge: restart at level m from the full half-line
// (-inf, r_m], evolved through the same edge field up to level n, relative
// to r_m. Returns -inf when r_m is -inf (empty restart anchor).
int64_t r_two_param(const OrientedConfig& oc, int m, int n);

enum class AlphaStatus : uint8_t { supercritical, at_or_below_criticality, subcritical };

struct AlphaEstimate {
    EstimateCI est;
    AlphaStatus status = AlphaStatus::at_or_below_criticality;
    int dead_replicates = 0;  // replicates with r_n = -inf, excluded from the mean
};

const char* alpha_status_name(AlphaStatus s);

// alpha_hat = mean(r_n) / n with a bootstrap CI. Flags supercritical when
// the CI excludes 0, subcritical when every replicate died.
AlphaEstimate estimate_alpha(double p, int n, int reps, uint64_t master_seed);

// Exact rational slope (v.y - u.y) / (v.x - u.x); throws on vertical pairs.
struct Rational {
    long long num = 0;
    long long den = 1;
    double value() const { return double(num) / double(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
};

Rational slope(Vertex u, Vertex v);

// The lowest northeast 1-path from u to the column {x = target_x} in the
// weight field: all edges have weight exactly 1, steps are +x or +y only,
// and no such path has a vertex below it in any column. Returns nullopt when
// no such path exists and nonexistence is certifiable inside the region;
// throws RegionCertificationError when the reachable set can escape through
// the region top.
std::optional<LatticePath> lowest_ne_one_path(const Configuration& config, Vertex u, int target_x,
                                              const Region& region);

}  // namespace fpp
