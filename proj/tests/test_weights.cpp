#include <cmath>
#include <unordered_set>

#include "doctest.h"
#include "fpp/stats.hpp"
#include "fpp/weights.hpp"

using namespace fpp;

TEST_CASE("constant-one assigns 1 to every edge") {
    Configuration c(7, DistributionSpec::constant(), 0);
    CHECK(c.weight_at({0, 0, Orientation::horizontal}) == 1.0);
    CHECK(c.weight_at({-3, 12, Orientation::vertical}) == 1.0);
}

TEST_CASE("repeated queries are bit-identical") {
    Configuration c(123456789, DistributionSpec::two_point(0.8, 3.0), 4);
    EdgeId e{17, -5, Orientation::vertical};
    double first = c.weight_at(e);
    for (int k = 0; k < 10; ++k) CHECK(c.weight_at(e) == first);
}

TEST_CASE("two-point empirical atom frequency within 3 standard errors") {
    // Binomial oracle: freq of weight 1 over N edges ~ p +- 3 sqrt(p(1-p)/N).
    const double p = 0.8;
    const int N = 1'000'000;
    Configuration c(42, DistributionSpec::two_point(p, 3.0), 0);
    int64_t ones = 0;
    for (int i = 0; i < N; ++i) {
        EdgeId e{i % 1000, i / 1000, Orientation::horizontal};
        double w = c.weight_at(e);
        CHECK((w == 1.0 || w == 3.0));
        if (w == 1.0) ++ones;
    }
    double freq = double(ones) / N;
    double se = std::sqrt(p * (1 - p) / N);
    CHECK(std::abs(freq - p) <= 3 * se);
}

TEST_CASE("continuous marginals pass a KS test at significance 1e-3") {
    const int N = 100'000;
    auto run = [&](DistributionSpec spec) {
        Configuration c(99, spec, 3);
        std::vector<double> sample;
        sample.reserve(N);
        for (int i = 0; i < N; ++i)
            sample.push_back(c.weight_at({i % 500, i / 500, Orientation::vertical}));
        auto ks = stats::ks_one_sample(sample, [&](double t) { return spec.cdf(t); }, 1e-3);
        CHECK(ks.pass);
    };
    run(DistributionSpec::one_plus_exp(1.0));
    run(DistributionSpec::one_plus_uniform(1.0));
}

TEST_CASE("discrete marginal matches via per-value z-gates at 1e-3") {
    const int N = 100'000;
    const double p = 0.6, b = 2.5;
    Configuration c(1234, DistributionSpec::two_point(p, b), 1);
    int ones = 0;
    for (int i = 0; i < N; ++i)
        if (c.weight_at({i, 0, Orientation::horizontal}) == 1.0) ++ones;
    double freq = double(ones) / N;
    double z_crit = 3.2905;  // two-sided 1e-3
    CHECK(std::abs(freq - p) <= z_crit * std::sqrt(p * (1 - p) / N));
}

TEST_CASE("disjoint edge pairs are uncorrelated (|rho| < 0.02)") {
    const int pairs = 10'000;
    Configuration c(2024, DistributionSpec::one_plus_uniform(1.0), 0);
    std::vector<double> xs, ys;
    for (int i = 0; i < pairs; ++i) {
        xs.push_back(c.weight_at({2 * i, 0, Orientation::horizontal}));
        ys.push_back(c.weight_at({2 * i + 1, 0, Orientation::horizontal}));
    }
    double mx = stats::mean(xs), my = stats::mean(ys);
    double sxy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < pairs; ++i) {
        sxy += (xs[size_t(i)] - mx) * (ys[size_t(i)] - my);
        sxx += (xs[size_t(i)] - mx) * (xs[size_t(i)] - mx);
        syy += (ys[size_t(i)] - my) * (ys[size_t(i)] - my);
    }
    CHECK(std::abs(sxy / std::sqrt(sxx * syy)) < 0.02);
}

TEST_CASE("distinct replicates give distinct fields") {
    DistributionSpec spec = DistributionSpec::one_plus_exp(1.0);
    Configuration a(5, spec, 0), b(5, spec, 1);
    int diffs = 0;
    for (int i = 0; i < 100; ++i)
        if (a.weight_at({i, 0, Orientation::horizontal}) != b.weight_at({i, 0, Orientation::horizontal}))
            ++diffs;
    CHECK(diffs > 90);
}

TEST_CASE("mass_budget closed-form examples") {
    CHECK(mass_budget(16.0, 1, 1.0) == doctest::Approx(1.0 / 96.0).epsilon(1e-12));
    CHECK(mass_budget(16.0, 1, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mass_budget(8.0, 1, 1.0) == doctest::Approx(1.0 / (96.0 * 96.0)).epsilon(1e-12));
}

TEST_CASE("mass_budget satisfies its defining equation to 1e-12 relative") {
    struct Case {
        double delta;
        int M;
        double N;
    };
    for (const auto& [delta, M, N] : {Case{16.0, 1, 1.0}, Case{16.0, 1, 0.0}, Case{8.0, 1, 1.0},
                                      Case{4.0, 3, 2.0}, Case{1.0, 3, 1.0}, Case{0.5, 1, 0.5},
                                      Case{0.05, 1, 0.05}, Case{16.0, 10, 3.3}}) {
        double q = mass_budget(delta, M, N);
        // q^(delta/16) (48M)^N = 1/2, checked in log space.
        double lhs = (delta / 16.0) * std::log(q) + N * std::log(48.0 * M);
        CHECK(lhs == doctest::Approx(std::log(0.5)).epsilon(1e-12));
    }
}

TEST_CASE("mass_budget underflow reports a numerically-zero threshold") {
    CHECK_THROWS_AS(mass_budget(0.001, 10, 50.0), std::underflow_error);
}

TEST_CASE("weight_threshold per family") {
    CHECK(weight_threshold(DistributionSpec::two_point(0.8, 3.0), 0.01) == doctest::Approx(2.0));
    // Exponential family: invert 1 - exp(-(z-1)) = cap; numeric inversion
    // cross-checked against the closed form.
    double cap = 0.01;
    double z = weight_threshold(DistributionSpec::one_plus_exp(1.0), cap);
    CHECK(z == doctest::Approx(1.0 - std::log(1.0 - cap)).epsilon(1e-12));
    CHECK(z == doctest::Approx(1.01005).epsilon(1e-4));
    DistributionSpec spec = DistributionSpec::one_plus_exp(1.0);
    CHECK(spec.cdf(z) - spec.cdf(1.0) == doctest::Approx(cap).epsilon(1e-9));
    CHECK_THROWS_AS(weight_threshold(DistributionSpec::constant(), 0.01), std::domain_error);
    double zu = weight_threshold(DistributionSpec::one_plus_uniform(2.0), 0.25);
    CHECK(zu == doctest::Approx(1.5));
}

TEST_CASE("canonical textual forms round-trip") {
    for (const char* text : {"constant_one", "two_point(p=0.8, b=3)", "one_plus_exp(rate=1)",
                             "one_plus_uniform(width=1)"}) {
        auto spec = DistributionSpec::parse(text);
        CHECK(DistributionSpec::parse(spec.to_string()) == spec);
    }
    CHECK(DistributionSpec::parse("two_point(p=0.8, b=3.0)").b == doctest::Approx(3.0));
    CHECK_THROWS(DistributionSpec::parse("two_point(p=0.8)"));
    CHECK_THROWS(DistributionSpec::parse("nonsense(a=1)"));
    CHECK_THROWS(DistributionSpec::parse("two_point(p=1.5, b=3)"));
}

TEST_CASE("coupled monotonicity in b") {
    DistributionSpec lo = DistributionSpec::two_point(0.61, 2.0);
    DistributionSpec hi = DistributionSpec::two_point(0.61, 3.0);
    Configuration a(77, lo, 2), b(77, hi, 2);
    for (int i = 0; i < 2000; ++i) {
        EdgeId e{i % 40, i / 40, i % 2 ? Orientation::horizontal : Orientation::vertical};
        CHECK(a.weight_at(e) <= b.weight_at(e));
    }
}
