#pragma once

// Monte Carlo estimators and experiment procedures: time constants, the
// flat-edge angles, variance scans by direction, concentration tails, shape
// boundary estimation, and the marked-vertex census experiment.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fpp/oriented.hpp"
#include "fpp/renorm.hpp"
#include "fpp/stats.hpp"
#include "fpp/weights.hpp"

namespace fpp {

struct Direction {
    enum class Kind : uint8_t { axis, diagonal, angle } kind = Kind::axis;
    double theta = 0.0;  // radians, only for Kind::angle

    // Integer lattice target for scale n: (n,0) on the axis, (n,n) on the
    // diagonal, the rounded polar point otherwise (ties toward the
    // lexicographically smaller vertex).
    Vertex target(int n) const;
    std::string name() const;
    static Direction axis() { return {Kind::axis, 0.0}; }
    static Direction diagonal() { return {Kind::diagonal, 0.0}; }
    static Direction angle(double theta) { return {Kind::angle, theta}; }
    static Direction parse(const std::string& text);
};

// Per-replicate passage time T(0, n*direction) via certified regions.
// Replicate index i maps to Configuration(seed, dist, replicate_offset + i).
std::vector<double> sample_passage_times(const DistributionSpec& dist, Direction dir, int n,
                                         int reps, uint64_t seed, int workers,
                                         uint32_t replicate_offset = 0);

// mu_hat(x) = mean T(0, nx)/n with a normal-theory CI. The finite-n mean is
// an upper bound on the time constant in expectation (subadditivity), so the
// point estimate carries an upward bias that shrinks with n.
EstimateCI estimate_mu(const DistributionSpec& dist, Direction dir, int n, int reps, uint64_t seed,
                       int workers = 0);

// Flat-edge angles (theta1 <= theta2) for right-edge speed alpha_p in
// [0, 1/sqrt(2)]:
//   tan(theta1) = (1/2 - alpha/sqrt 2) / (1/2 + alpha/sqrt 2), and the
//   reciprocal for theta2. Equal iff alpha = 0 (both pi/4).
std::pair<double, double> theta_flat(double alpha_p);

struct VarianceScanPoint {
    int n = 0;
    double variance = 0.0;
    double jackknife_se = 0.0;
    stats::Interval ci;
};

struct VarianceScanResult {
    Direction direction;
    std::vector<VarianceScanPoint> points;
    stats::LineFit log_fit;  // variance regressed on log n, weighted by jackknife SEs
    std::vector<std::vector<double>> samples;  // raw times, one vector per n
};

VarianceScanResult variance_scan(const DistributionSpec& dist, Direction dir,
                                 const std::vector<int>& n_list, int reps, uint64_t seed,
                                 int workers = 0);

struct ConcentrationRow {
    double x = 0.0;
    double freq_a = 0.0;  // frequency of |a_{0,n} - mean| >= x sqrt(n)
    double freq_b = 0.0;  // same for the point-to-line time
};

std::vector<ConcentrationRow> concentration_check(const DistributionSpec& dist, int n, int reps,
                                                  const std::vector<double>& x_list, uint64_t seed,
                                                  int workers = 0);

struct ShapeAngleSample {
    double theta = 0.0;
    double rho_over_t = 0.0;      // Euclidean boundary radius, normalized by t
    stats::Interval rho_ci;       // normalized CI from the mean-time bracketing
    double l1_radius = 0.0;       // rho/t * (|cos| + |sin|)
};

struct ShapeEstimate {
    double t = 0.0;
    std::vector<ShapeAngleSample> boundary;
    // Flat-edge report: contiguous angular window around pi/4 where the
    // l1-radius reaches 1 within tolerance, against the predicted angles.
    bool flat_edge_detected = false;
    double flat_lo = 0.0, flat_hi = 0.0;
    double flat_tolerance = 0.0;
    double alpha_hat = 0.0;
    double theta1_hat = 0.0, theta2_hat = 0.0;
};

ShapeEstimate shape_estimate(const DistributionSpec& dist, double t, int reps, int angle_count,
                             uint64_t seed, int workers = 0);

// Auxiliary parameters derived for the census experiment. Everything is
// reproducible from the master seed (auxiliary estimation runs use a
// reserved replicate block).
struct CensusParams {
    double mu_hat = 1.0;
    double length_factor = 3.0;  // N = 3 mu_hat unless overridden
    double mass_cap = 0.0;       // from (delta, M, N)
    double z = 2.0;
    double alpha_hat = 0.0;
    bool alpha_clamped = false;  // alpha_hat fell outside [0, 1/sqrt2]
    double tan_theta1 = 1.0;
    double delta1 = 0.01;  // eta_hat / 100, eta_hat = 1 + tan(theta1) - mu_hat
};

CensusParams derive_census_params(const DistributionSpec& dist, int M, double delta,
                                  std::optional<double> z_override,
                                  std::optional<double> length_factor_override, uint64_t seed,
                                  int workers = 0);

struct CensusReplicate {
    int rep = 0;
    double time = 0.0;
    int64_t count = 0;    // |B(m) ∩ (S_M ∪ D)|
    int64_t count_z = 0;  // |B(m) ∩ (S_M_z ∪ D_z)|
    int bridge_count = 0;
    int flat_count = 0;
    int64_t fattened = 0;
    bool exits_top_bottom = false;
    bool census_bound_ok = false;   // sum_s R_M(q_s) M^2 >= count_z
    bool structure_ok = false;      // bridge-list invariants
    std::string structure_error;
    std::array<int64_t, 49> family_counts{};
    RenormReport report;
};

struct CensusExperiment {
    int n = 0, m = 0, M = 0;
    CensusParams params;
    std::vector<CensusReplicate> rows;
    EstimateCI ratio;    // mean count_z / m with jackknife (SEM) CI
    EstimateCI ratio_1;  // mean count / m
    int census_bound_violations = 0;
    int structure_violations = 0;
    bool window_warning = false;  // n/2 >= m >= n^(2/3) violated
};

// Census experiment at one box size m: per replicate the geodesic to (n,0),
// its bridges, marks, counts and renormalization report. Replicate indices
// start at `replicate_offset` so scans over m can use disjoint blocks.
CensusExperiment theorem1_experiment(const DistributionSpec& dist, int n, int m, int M,
                                     double delta, std::optional<double> z_override, int reps,
                                     uint64_t seed, int workers = 0, uint32_t replicate_offset = 0,
                                     std::optional<double> length_factor_override = std::nullopt);

}  // namespace fpp
