#include <climits>
#include <cmath>

#include "doctest.h"
#include "fpp/oriented.hpp"
#include "fpp/stats.hpp"
#include "oracles.hpp"

using namespace fpp;
using oracles::TestRng;

TEST_CASE("degenerate openness: p = 1 and p = 0") {
    OrientedConfig all(1.0, 3, 0);
    auto trace = evolve_right_edge(all, 12);
    for (int k = 0; k <= 12; ++k) CHECK(trace.values[size_t(k)] == k);
    CHECK(trace.certified);

    OrientedConfig none(0.0, 3, 0);
    auto dead = evolve_right_edge(none, 5);
    CHECK(dead.values[0] == 0);
    for (int k = 1; k <= 5; ++k) CHECK(dead.dead(size_t(k)));
}

TEST_CASE("level-1 right edge equals direct edge enumeration, pathwise") {
    for (double p : {0.3, 0.5, 0.8}) {
        for (uint32_t rep = 0; rep < 3000; ++rep) {
            OrientedConfig oc(p, 91, rep);
            auto trace = evolve_right_edge(oc, 1);
            // The evolution window for n=1 spans 70 sites; scanning deeper
            // can only matter with probability (1-p)^70.
            CHECK(trace.values[1] == oracles::brute_right_edge_level1(oc, 70));
        }
    }
}

TEST_CASE("mean level-1 right edge matches the two-geometric closed form") {
    // E r_1 = 1 - q/p + q^3/(p(1+q)): the up-right scan gives 1 - G_R, the
    // up-left scan gives -1 - G_L, and r_1 is the larger of the two.
    for (double p : {0.5, 0.7}) {
        const int reps = 100000;
        std::vector<double> vals;
        vals.reserve(reps);
        for (uint32_t rep = 0; rep < reps; ++rep) {
            OrientedConfig oc(p, 2025, rep);
            vals.push_back(double(evolve_right_edge(oc, 1).values[1]));
        }
        double se = stats::sem(vals);
        CHECK(std::abs(stats::mean(vals) - oracles::exact_mean_r1(p)) <= 3 * se);
    }
}

TEST_CASE("two-parameter coupling: r_n <= r_m + r_{m,n}, zero violations") {
    for (double p : {0.5, 0.7}) {
        int violations = 0;
        for (uint32_t rep = 0; rep < 2000; ++rep) {
            OrientedConfig oc(p, 1411, rep);
            auto trace = evolve_right_edge(oc, 48);
            int64_t rn = trace.values[48];
            int64_t rm = trace.values[24];
            int64_t rel = r_two_param(oc, 24, 48);
            if (rn == kRightEdgeDead) continue;  // -inf <= anything
            if (rm == kRightEdgeDead || rel == kRightEdgeDead || rn > rm + rel) ++violations;
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("r_{m,n} is distributed as a fresh r_{n-m} (two-sample KS at 1e-3)") {
    const int n = 48, m = 16, reps = 4000;
    std::vector<double> restarted, fresh;
    for (uint32_t rep = 0; rep < reps; ++rep) {
        OrientedConfig oc(0.7, 500, rep);
        int64_t rel = r_two_param(oc, m, n);
        if (rel != kRightEdgeDead) restarted.push_back(double(rel));
        OrientedConfig oc2(0.7, 501, rep);
        auto tr = evolve_right_edge(oc2, n - m);
        if (tr.values.back() != kRightEdgeDead) fresh.push_back(double(tr.values.back()));
    }
    auto ks = stats::ks_two_sample(restarted, fresh, 1e-3);
    CAPTURE(ks.statistic);
    CAPTURE(ks.critical);
    CHECK(ks.pass);
}

TEST_CASE("right edge is monotone in p under the coupled field") {
    for (uint32_t rep = 0; rep < 200; ++rep) {
        OrientedConfig lo(0.55, 77, rep), hi(0.75, 77, rep);
        auto a = evolve_right_edge(lo, 40);
        auto b = evolve_right_edge(hi, 40);
        for (size_t k = 0; k < a.values.size(); ++k) {
            if (a.values[k] == kRightEdgeDead) continue;
            CHECK(b.values[k] != kRightEdgeDead);
            CHECK(a.values[k] <= b.values[k]);
        }
    }
}

TEST_CASE("subadditivity of right-edge means") {
    const int a = 20, b = 28, reps = 3000;
    std::vector<double> ra, rb, rab;
    for (uint32_t rep = 0; rep < reps; ++rep) {
        OrientedConfig oc(0.7, 9090, rep);
        auto tr = evolve_right_edge(oc, a + b);
        if (tr.values[size_t(a)] != kRightEdgeDead) ra.push_back(double(tr.values[size_t(a)]));
        if (tr.values[size_t(b)] != kRightEdgeDead) rb.push_back(double(tr.values[size_t(b)]));
        if (tr.values.back() != kRightEdgeDead) rab.push_back(double(tr.values.back()));
    }
    double pooled_se = std::sqrt(stats::sem(ra) * stats::sem(ra) + stats::sem(rb) * stats::sem(rb) +
                                 stats::sem(rab) * stats::sem(rab));
    CHECK(stats::mean(rab) <= stats::mean(ra) + stats::mean(rb) + 3 * pooled_se);
}

TEST_CASE("upper-tail frequencies fall with n (p = 0.8, eta = 0.1)") {
    const double p = 0.8, eta = 0.1;
    auto alpha = estimate_alpha(p, 400, 60, 31337);
    REQUIRE(alpha.status == AlphaStatus::supercritical);
    double a_hat = alpha.est.point;

    auto tail_freq = [&](int n) {
        const int reps = 1200;
        int hits = 0;
        for (uint32_t rep = 0; rep < reps; ++rep) {
            OrientedConfig oc(p, 604, rep + uint32_t(n) * 100000u);
            auto tr = evolve_right_edge(oc, n);
            if (tr.values.back() != kRightEdgeDead &&
                double(tr.values.back()) >= double(n) * (a_hat + eta))
                ++hits;
        }
        return double(hits) / reps;
    };
    double f50 = tail_freq(50), f100 = tail_freq(100), f200 = tail_freq(200);
    CAPTURE(f50);
    CAPTURE(f100);
    CAPTURE(f200);
    CHECK(f100 <= f50);
    CHECK(f200 <= f100);
    // Absolute gate fixed by pilot (seeds 604/31337, 1200 reps per n):
    // observed f200 = 0.047 +- 0.006; the decay at these parameters has not
    // reached 1e-2 by n = 200.
    CHECK(f200 < 0.08);
}

TEST_CASE("slope: exact rationals and the vertical error") {
    CHECK(slope({0, 0}, {4, 2}) == Rational{1, 2});
    CHECK(slope({1, 1}, {3, 1}) == Rational{0, 1});
    CHECK(slope({0, 0}, {2, -4}) == Rational{-2, 1});
    CHECK(slope({5, 1}, {1, 3}) == Rational{-1, 2});  // direction-insensitive
    CHECK_THROWS_AS(slope({2, 0}, {2, 5}), std::invalid_argument);
}

TEST_CASE("estimate_alpha endpoints and criticality statuses") {
    auto one = estimate_alpha(1.0, 60, 10, 5);
    CHECK(one.est.point == 1.0);
    CHECK(one.status == AlphaStatus::supercritical);

    auto nearly = estimate_alpha(0.99, 500, 30, 6);
    CHECK(nearly.status == AlphaStatus::supercritical);
    CHECK(nearly.est.point > 0.9);
    CHECK(nearly.est.point < 1.0);

    auto sub = estimate_alpha(0.3, 500, 30, 7);
    CHECK(sub.status == AlphaStatus::subcritical);
    CHECK(sub.dead_replicates == 30);
}

TEST_CASE("trace CSV renders the dead sentinel as -inf") {
    OrientedConfig oc(0.0, 1, 0);
    auto trace = evolve_right_edge(oc, 2);
    auto csv = trace_to_csv(trace);
    CHECK(csv.find("0,0\n") != std::string::npos);
    CHECK(csv.find("1,-inf\n") != std::string::npos);
}

TEST_CASE("lowest northeast 1-path: constant-one gives the horizontal segment") {
    Configuration c(3, DistributionSpec::constant(), 0);
    Region region{0, 8, 0, 8};
    auto path = lowest_ne_one_path(c, {0, 0}, 8, region);
    REQUIRE(path.has_value());
    CHECK(path->vertices.size() == 9);
    for (const auto& v : path->vertices) CHECK(v.y == 0);
}

TEST_CASE("lowest northeast 1-path: a closed east edge forces the climb") {
    // Find a seed whose east edge at the origin is heavy and north edge is
    // open; the lowest path must then step north first.
    DistributionSpec spec = DistributionSpec::two_point(0.6, 2.0);
    for (uint64_t seed = 0;; ++seed) {
        REQUIRE(seed < 10000);
        Configuration c(seed, spec, 0);
        bool east = c.weight_at({0, 0, Orientation::horizontal}) == 1.0;
        bool north = c.weight_at({0, 0, Orientation::vertical}) == 1.0;
        if (east || !north) continue;
        Region region{0, 6, 0, 24};
        std::optional<LatticePath> path;
        try {
            path = lowest_ne_one_path(c, {0, 0}, 6, region);
        } catch (const RegionCertificationError&) {
            continue;
        }
        if (!path) continue;
        CHECK(path->vertices[1] == Vertex{0, 1});
        break;
    }
}

TEST_CASE("lowest northeast 1-path against exhaustive enumeration") {
    TestRng rng(246);
    int checked = 0, found = 0;
    while (checked < 200) {
        Configuration c(rng.next(), DistributionSpec::two_point(0.75, 2.0), uint32_t(checked));
        Region region{0, 6, 0, 14};
        std::optional<LatticePath> path;
        try {
            path = lowest_ne_one_path(c, {0, 0}, 6, region);
        } catch (const RegionCertificationError&) {
            continue;  // escape through the top: nonexistence not certifiable
        }
        ++checked;

        // Columnwise minima over all in-region northeast 1-paths.
        std::vector<int> best(7, INT_MAX);
        long total = 0;
        oracles::enumerate_ne_one_paths(c, {0, 0}, 6, region, [&](const LatticePath& q) {
            ++total;
            for (const auto& v : q.vertices) best[size_t(v.x)] = std::min(best[size_t(v.x)], v.y);
        });
        if (!path) {
            CHECK(total == 0);
            continue;
        }
        ++found;
        CHECK(total > 0);
        // The returned path is a northeast 1-path...
        for (size_t i = 0; i + 1 < path->vertices.size(); ++i) {
            Vertex a = path->vertices[i], b = path->vertices[i + 1];
            CHECK(((b.x == a.x + 1 && b.y == a.y) || (b.x == a.x && b.y == a.y + 1)));
            CHECK(c.weight_at(edge_between(a, b)) == 1.0);
        }
        // ...and no enumerated path passes strictly below it at any column.
        std::vector<int> mine(7, INT_MAX);
        for (const auto& v : path->vertices) mine[size_t(v.x)] = std::min(mine[size_t(v.x)], v.y);
        for (int x = 0; x <= 6; ++x) {
            if (best[size_t(x)] != INT_MAX && mine[size_t(x)] != INT_MAX)
                CHECK(mine[size_t(x)] <= best[size_t(x)]);
        }
    }
    CHECK(found > 50);  // p = 0.75 percolates often at this scale
}
