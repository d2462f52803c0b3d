#pragma once

// Edge-time distributions and deterministic seeded configurations over the
// infinite lattice. A Configuration assigns a weight to every edge of Z^2 as
// a pure function of (master_seed, replicate_index, edge id); queries are
// order-independent and identical across runs, so any finite region behaves
// exactly like a window into one fixed infinite sample.

#include <cstdint>
#include <string>

#include "fpp/lattice.hpp"

namespace fpp {

enum class DistFamily : uint8_t {
    constant_one,       // t(e) = 1
    two_point,          // t(e) = 1 w.p. p, = b w.p. 1-p  (b > 1)
    one_plus_exp,       // t(e) = 1 + Exp(rate)
    one_plus_uniform,   // t(e) = 1 + U(0, width)
};

struct DistributionSpec {
    DistFamily family = DistFamily::constant_one;
    double p = 1.0;      // atom at 1: P(t(e) = 1) = F(1)
    double b = 2.0;      // second value of two_point, b > 1
    double rate = 1.0;   // one_plus_exp
    double width = 1.0;  // one_plus_uniform

    static DistributionSpec constant();
    static DistributionSpec two_point(double p, double b);
    static DistributionSpec one_plus_exp(double rate);
    static DistributionSpec one_plus_uniform(double width);

    // F(1) = P(t(e) = 1). Zero for the continuous families.
    double atom_at_one() const;
    // CDF F(t).
    double cdf(double t) const;
    // Inverse-CDF transform of a uniform u in [0,1).
    double quantile(double u) const;
    // Largest weight the family can produce (+inf for one_plus_exp).
    double max_weight() const;

    void validate() const;

    // Canonical textual form, e.g. "two_point(p=0.8, b=3)".
    std::string to_string() const;
    static DistributionSpec parse(const std::string& text);

    friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

// splitmix64 finalizer; full-avalanche 64-bit mix.
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline double uniform_from_bits(uint64_t h) {
    return double(h >> 11) * 0x1.0p-53;
}

// One sample point of the product measure: a lazily addressable assignment
// of edge times over all of Z^2. Immutable and safe to share across threads.
struct Configuration {
    uint64_t master_seed = 0;
    DistributionSpec dist;
    uint32_t replicate_index = 0;

    Configuration() = default;
    Configuration(uint64_t seed, DistributionSpec d, uint32_t replicate)
        : master_seed(seed), dist(d), replicate_index(replicate) {
        d.validate();
        base_ = mix64(mix64(seed + 0x9e3779b97f4a7c15ull) ^
                      mix64(uint64_t(replicate) * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull));
    }

    // Uniform [0,1) variate attached to edge e; the same variate underlies
    // every family, which gives pathwise monotone couplings in p and b.
    double edge_uniform(EdgeId e) const {
        uint64_t k1 = (uint64_t(uint32_t(e.x)) << 32) | uint32_t(e.y);
        uint64_t k2 = uint64_t(e.orient) + 0x6a09e667f3bcc909ull;
        return uniform_from_bits(mix64(mix64(base_ ^ k1) + k2));
    }

    double weight_at(EdgeId e) const { return dist.quantile(edge_uniform(e)); }
    double operator()(EdgeId e) const { return weight_at(e); }

  private:
    uint64_t base_ = 0;
};

inline double weight_at(const Configuration& c, EdgeId e) { return c.weight_at(e); }

// Probability-mass budget near 1: the unique q in (0,1) with
//   q^(delta/16) * (48*M)^N = 1/2.
// Throws std::underflow_error when q underflows to subnormal/zero
// ("threshold numerically zero").
double mass_budget(double delta, int M, double N);

// Weight threshold z > 1 with F(z) - F(1) <= mass_cap. For two_point the CDF
// is flat on (1,b) and the canonical choice is (1+b)/2; for the continuous
// families z solves F(z) = mass_cap exactly. constant_one has no mass above
// one and throws std::domain_error.
double weight_threshold(const DistributionSpec& spec, double mass_cap);

}  // namespace fpp
