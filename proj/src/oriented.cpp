#include "fpp/oriented.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "fpp/stats.hpp"

namespace fpp {

namespace {

// Bit field over the absolute window [lo, lo + bits); one evolution level.
struct LevelField {
    int64_t lo = 0;
    std::vector<uint64_t> words;

    bool get(int64_t x) const {
        int64_t i = x - lo;
        if (i < 0 || i >= int64_t(words.size()) * 64) return false;
        return (words[size_t(i >> 6)] >> (i & 63)) & 1;
    }
    void set(int64_t x) {
        int64_t i = x - lo;
        words[size_t(i >> 6)] |= uint64_t(1) << (i & 63);
    }
    int64_t highest_set() const {
        for (int64_t w = int64_t(words.size()) - 1; w >= 0; --w)
            if (words[size_t(w)]) return lo + w * 64 + (63 - int64_t(__builtin_clzll(words[size_t(w)])));
        return kRightEdgeDead;
    }
    bool any() const {
        for (uint64_t w : words)
            if (w) return true;
        return false;
    }
};

// Evolve the half-line-style field from `start_level` to `end_level` on a
// fixed window sized for a horizon of `window_levels` levels. `init_hi` is
// the rightmost initially occupied site; all window sites <= init_hi start
// occupied (half-line source). Sites left of the window are dropped; the
// trace is certified while the recorded right edge stays at or above the
// highest site those drops could have reached.
//
// Using one window floor for both phases of the two-parameter process makes
// the restarted field dominate the plain one pointwise, so
// r_n <= r_m + r_{m,n} holds deterministically, not just with high
// probability.
RightEdgeTrace evolve_window(const OrientedConfig& oc, int start_level, int end_level,
                             int64_t init_hi, int64_t lo) {
    int levels = end_level - start_level;
    int64_t width = init_hi + int64_t(levels) + 2 - lo + 1;
    size_t nwords = size_t((width + 63) / 64);

    LevelField cur{lo, std::vector<uint64_t>(nwords, 0)};
    for (int64_t x = lo; x <= init_hi; ++x) cur.set(x);

    RightEdgeTrace trace;
    trace.values.reserve(size_t(levels) + 1);
    trace.values.push_back(init_hi);
    int64_t uncertain_x = lo - 1;  // rightmost site the dropped sources could occupy

    LevelField next{lo, std::vector<uint64_t>(nwords, 0)};
    for (int k = 0; k < levels; ++k) {
        std::fill(next.words.begin(), next.words.end(), 0);
        int level = start_level + k;
        // Candidate targets are neighbors of occupied sites.
        for (size_t w = 0; w < nwords; ++w) {
            uint64_t self = cur.words[w];
            uint64_t left = (self << 1) | (w > 0 ? cur.words[w - 1] >> 63 : 0);
            uint64_t right = (self >> 1) | (w + 1 < nwords ? cur.words[w + 1] << 63 : 0);
            uint64_t cand = left | right;
            while (cand) {
                int b = __builtin_ctzll(cand);
                cand &= cand - 1;
                int64_t x = lo + int64_t(w) * 64 + b;
                bool occ = (cur.get(x - 1) && oc.open_edge(x - 1, level, +1)) ||
                           (cur.get(x + 1) && oc.open_edge(x + 1, level, -1));
                if (occ) next.set(x);
            }
        }
        std::swap(cur.words, next.words);
        ++uncertain_x;
        int64_t r = cur.highest_set();
        if (r == kRightEdgeDead || r < uncertain_x) {
            // Sites dropped at the window edge could reach above the tracked
            // field here; the value is a lower bound only.
            if (r != kRightEdgeDead) trace.certified = false;
        }
        trace.values.push_back(r);
    }
    return trace;
}

}  // namespace

namespace {
// Window floor for an n-level run: 4n plus slack below the source.
int64_t window_floor(int n) { return -(4 * int64_t(n) + 66); }
}  // namespace

RightEdgeTrace evolve_right_edge(const OrientedConfig& oc, int n) {
    if (n < 0) throw std::invalid_argument("evolve_right_edge: n must be >= 0");
    return evolve_window(oc, 0, n, 0, window_floor(n));
}

int64_t r_two_param(const OrientedConfig& oc, int m, int n) {
    if (!(0 <= m && m < n)) throw std::invalid_argument("r_two_param: need 0 <= m < n");
    // Phase 1 reproduces the levels 0..m of evolve_right_edge(oc, n) exactly
    // (same window), so the restart anchor agrees with the full trace. Phase
    // 2 keeps the same floor, so its field contains the plain field at every
    // level and the subadditive coupling is exact.
    RightEdgeTrace to_m = evolve_window(oc, 0, m, 0, window_floor(n));
    int64_t rm = to_m.values.back();
    if (rm == kRightEdgeDead) return kRightEdgeDead;
    RightEdgeTrace onward = evolve_window(oc, m, n, rm, std::min<int64_t>(0, rm) + window_floor(n));
    int64_t rn = onward.values.back();
    if (rn == kRightEdgeDead) return kRightEdgeDead;
    return rn - rm;
}

std::string trace_to_csv(const RightEdgeTrace& trace) {
    std::string out = "level,r\n";
    char buf[64];
    for (size_t k = 0; k < trace.values.size(); ++k) {
        if (trace.values[k] == kRightEdgeDead)
            std::snprintf(buf, sizeof buf, "%zu,-inf\n", k);
        else
            std::snprintf(buf, sizeof buf, "%zu,%lld\n", k, (long long)trace.values[k]);
        out += buf;
    }
    return out;
}

const char* alpha_status_name(AlphaStatus s) {
    switch (s) {
        case AlphaStatus::supercritical: return "supercritical";
        case AlphaStatus::at_or_below_criticality: return "at-or-below-criticality";
        case AlphaStatus::subcritical: return "subcritical";
    }
    return "?";
}

AlphaEstimate estimate_alpha(double p, int n, int reps, uint64_t master_seed) {
    if (n < 1 || reps < 1) throw std::invalid_argument("estimate_alpha: n and reps must be >= 1");
    AlphaEstimate out;
    std::vector<double> ratios;
    ratios.reserve(size_t(reps));
    for (int r = 0; r < reps; ++r) {
        OrientedConfig oc(p, master_seed, uint32_t(r));
        auto trace = evolve_right_edge(oc, n);
        int64_t rn = trace.values.back();
        if (rn == kRightEdgeDead) {
            ++out.dead_replicates;
            continue;
        }
        ratios.push_back(double(rn) / double(n));
    }
    out.est.reps = reps;
    out.est.n_used = n;
    out.est.seed = master_seed;
    if (ratios.empty()) {
        out.status = AlphaStatus::subcritical;
        return out;
    }
    out.est.point = stats::mean(ratios);
    if (ratios.size() >= 2) {
        auto ci = stats::bootstrap_mean_ci(ratios, master_seed ^ 0xb007u, 1000);
        out.est.ci_low = ci.lo;
        out.est.ci_high = ci.hi;
    } else {
        out.est.ci_low = out.est.ci_high = out.est.point;
    }
    out.status = (out.est.ci_low > 0.0) ? AlphaStatus::supercritical
                                        : AlphaStatus::at_or_below_criticality;
    return out;
}

Rational slope(Vertex u, Vertex v) {
    long long dx = v.x - u.x;
    long long dy = v.y - u.y;
    if (dx == 0) throw std::invalid_argument("slope: vertical pair");
    long long g = std::gcd(std::abs(dx), std::abs(dy));
    if (g == 0) g = 1;
    dx /= g;
    dy /= g;
    if (dx < 0) {
        dx = -dx;
        dy = -dy;
    }
    return {dy, dx};
}

std::optional<LatticePath> lowest_ne_one_path(const Configuration& config, Vertex u, int target_x,
                                              const Region& region) {
    if (target_x <= u.x) throw std::invalid_argument("lowest_ne_one_path: target must be east of u");
    if (!region.contains(u) || target_x > region.x_max)
        throw std::invalid_argument("lowest_ne_one_path: out of region");

    const int x0 = u.x, x1 = target_x;
    const int y0 = std::max(u.y, region.y_min), y1 = region.y_max;
    const int w = x1 - x0 + 1, h = y1 - y0 + 1;
    auto idx = [&](int x, int y) { return size_t((y - y0) * w + (x - x0)); };
    auto east_open = [&](int x, int y) {
        return config.weight_at({x, y, Orientation::horizontal}) == 1.0;
    };
    auto north_open = [&](int x, int y) {
        return config.weight_at({x, y, Orientation::vertical}) == 1.0;
    };

    // Forward reachability by northeast 1-paths.
    std::vector<char> reach(size_t(w) * h, 0);
    reach[idx(u.x, u.y)] = 1;
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            if (!reach[idx(x, y)]) continue;
            if (x < x1 && east_open(x, y)) reach[idx(x + 1, y)] = 1;
            if (y < y1 && north_open(x, y)) reach[idx(x, y + 1)] = 1;
        }

    bool any_target = false;
    for (int y = y0; y <= y1; ++y) any_target |= bool(reach[idx(x1, y)]);
    if (!any_target) {
        // Nonexistence is certified only if the reachable set cannot leave
        // through the region top.
        for (int x = x0; x < x1; ++x)
            if (reach[idx(x, y1)] && north_open(x, y1))
                throw RegionCertificationError(
                    "lowest_ne_one_path: region too small to certify nonexistence");
        return std::nullopt;
    }

    // Backward viability toward the target column.
    std::vector<char> viable(size_t(w) * h, 0);
    for (int y = y0; y <= y1; ++y) viable[idx(x1, y)] = 1;
    for (int x = x1 - 1; x >= x0; --x)
        for (int y = y1; y >= y0; --y) {
            bool v = (east_open(x, y) && viable[idx(x + 1, y)]) ||
                     (y < y1 && north_open(x, y) && viable[idx(x, y + 1)]);
            viable[idx(x, y)] = char(v);
        }
    if (!viable[idx(u.x, u.y)]) return std::nullopt;  // unreachable from u specifically

    // Greedy: go east whenever the east continuation is viable, else climb.
    LatticePath path;
    Vertex cur = u;
    path.vertices.push_back(cur);
    while (cur.x < x1) {
        if (east_open(cur.x, cur.y) && viable[idx(cur.x + 1, cur.y)]) {
            cur.x += 1;
        } else if (cur.y < y1 && north_open(cur.x, cur.y) && viable[idx(cur.x, cur.y + 1)]) {
            cur.y += 1;
        } else {
            throw std::logic_error("lowest_ne_one_path: stuck on a viable vertex");
        }
        path.vertices.push_back(cur);
    }
    return path;
}

}  // namespace fpp
