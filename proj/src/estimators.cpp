#include "fpp/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fpp/geodesics.hpp"
#include "fpp/parallel.hpp"

namespace fpp {

namespace {

constexpr uint32_t kAuxReplicateBlock = 1u << 20;  // reserved for parameter derivation

int default_margin(int n) { return std::max(8, n / 16); }

}  // namespace

Vertex Direction::target(int n) const {
    switch (kind) {
        case Kind::axis: return {n, 0};
        case Kind::diagonal: return {n, n};
        case Kind::angle: break;
    }
    double fx = double(n) * std::cos(theta);
    double fy = double(n) * std::sin(theta);
    // Nearest lattice vertex; ties resolved toward the lexicographically
    // smaller (x, y).
    auto round_to = [](double v) {
        double f = std::floor(v);
        double frac = v - f;
        if (frac > 0.5) return int(f) + 1;
        return int(f);  // frac <= 0.5 rounds down, which is the smaller vertex
    };
    return {round_to(fx), round_to(fy)};
}

std::string Direction::name() const {
    switch (kind) {
        case Kind::axis: return "axis";
        case Kind::diagonal: return "diagonal";
        case Kind::angle: break;
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "angle:%.6g", theta);
    return buf;
}

Direction Direction::parse(const std::string& text) {
    if (text == "axis") return axis();
    if (text == "diagonal") return diagonal();
    if (text.rfind("angle:", 0) == 0) return angle(std::stod(text.substr(6)));
    throw std::invalid_argument("direction: expected axis | diagonal | angle:<radians>");
}

std::vector<double> sample_passage_times(const DistributionSpec& dist, Direction dir, int n,
                                         int reps, uint64_t seed, int workers,
                                         uint32_t replicate_offset) {
    if (n < 1 || reps < 1) throw std::invalid_argument("sample_passage_times: n, reps must be >= 1");
    Vertex target = dir.target(n);
    std::vector<double> times(size_t(reps), 0.0);
    parallel_replicates(reps, workers, [&](int i) {
        Configuration c(seed, dist, replicate_offset + uint32_t(i));
        auto [region, res] = auto_region(c, {0, 0}, target, default_margin(n));
        times[size_t(i)] = res.time;
    });
    return times;
}

EstimateCI estimate_mu(const DistributionSpec& dist, Direction dir, int n, int reps, uint64_t seed,
                       int workers) {
    auto times = sample_passage_times(dist, dir, n, reps, seed, workers);
    std::vector<double> ratios(times.size());
    for (size_t i = 0; i < times.size(); ++i) ratios[i] = times[i] / double(n);
    auto ci = stats::mean_ci(ratios);
    EstimateCI est;
    est.point = stats::mean(ratios);
    est.ci_low = ci.lo;
    est.ci_high = ci.hi;
    est.reps = reps;
    est.n_used = n;
    est.seed = seed;
    return est;
}

std::pair<double, double> theta_flat(double alpha_p) {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    if (!(alpha_p >= 0.0) || alpha_p > inv_sqrt2 + 1e-15)
        throw std::invalid_argument("theta_flat: alpha_p must lie in [0, 1/sqrt(2)]");
    double a = 0.5 - alpha_p * inv_sqrt2;
    double b = 0.5 + alpha_p * inv_sqrt2;
    double theta1 = std::atan2(a, b);
    double theta2 = std::atan2(b, a);
    return {theta1, theta2};
}

VarianceScanResult variance_scan(const DistributionSpec& dist, Direction dir,
                                 const std::vector<int>& n_list, int reps, uint64_t seed,
                                 int workers) {
    if (n_list.empty()) throw std::invalid_argument("variance_scan: empty n list");
    for (size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1])
            throw std::invalid_argument("variance_scan: n list must be strictly increasing");
    if (reps < 3) throw std::invalid_argument("variance_scan: need reps >= 3");

    VarianceScanResult out;
    out.direction = dir;
    std::vector<double> xs, ys, ws;
    for (int n : n_list) {
        auto times = sample_passage_times(dist, dir, n, reps, seed, workers);
        VarianceScanPoint pt;
        pt.n = n;
        auto est = stats::jackknife_variance(times);
        pt.variance = est.variance;
        pt.jackknife_se = est.jackknife_se;
        pt.ci = est.ci;
        out.points.push_back(pt);
        out.samples.push_back(std::move(times));
        xs.push_back(std::log(double(n)));
        ys.push_back(pt.variance);
        // Degenerate families have zero jackknife SE; weight those equally.
        ws.push_back(pt.jackknife_se > 0.0 ? 1.0 / (pt.jackknife_se * pt.jackknife_se) : 1.0);
    }
    if (n_list.size() >= 2) out.log_fit = stats::weighted_line_fit(xs, ys, ws);
    return out;
}

std::vector<ConcentrationRow> concentration_check(const DistributionSpec& dist, int n, int reps,
                                                  const std::vector<double>& x_list, uint64_t seed,
                                                  int workers) {
    if (reps < 2) throw std::invalid_argument("concentration_check: need reps >= 2");
    std::vector<double> a_times(size_t(reps), 0.0), b_times(size_t(reps), 0.0);
    parallel_replicates(reps, workers, [&](int i) {
        Configuration c(seed, dist, uint32_t(i));
        auto [region_a, res_a] = auto_region(c, {0, 0}, {n, 0}, default_margin(n));
        a_times[size_t(i)] = res_a.time;
        auto [region_b, res_b] = auto_region_to_line(c, {0, 0}, n, default_margin(n));
        b_times[size_t(i)] = res_b.time;
    });
    double mean_a = stats::mean(a_times), mean_b = stats::mean(b_times);
    double sqrt_n = std::sqrt(double(n));
    std::vector<ConcentrationRow> rows;
    for (double x : x_list) {
        ConcentrationRow row;
        row.x = x;
        int ca = 0, cb = 0;
        for (int i = 0; i < reps; ++i) {
            if (std::abs(a_times[size_t(i)] - mean_a) >= x * sqrt_n) ++ca;
            if (std::abs(b_times[size_t(i)] - mean_b) >= x * sqrt_n) ++cb;
        }
        row.freq_a = double(ca) / reps;
        row.freq_b = double(cb) / reps;
        rows.push_back(row);
    }
    return rows;
}

namespace {

// Mean passage time to the nearest-vertex target at Euclidean radius rho
// along direction theta, over a fixed replicate block.
double mean_time_at(const DistributionSpec& dist, double theta, double rho, int reps,
                    uint64_t seed, int workers) {
    Vertex target = Direction::angle(theta).target(std::max(1, int(std::lround(rho))));
    if (target.x == 0 && target.y == 0) return 0.0;
    std::vector<double> times(size_t(reps), 0.0);
    parallel_replicates(reps, workers, [&](int i) {
        Configuration c(seed, dist, uint32_t(i));
        auto [region, res] =
            auto_region(c, {0, 0}, target, default_margin(std::max(target.x, target.y)));
        times[size_t(i)] = res.time;
    });
    return stats::mean(times);
}

}  // namespace

ShapeEstimate shape_estimate(const DistributionSpec& dist, double t, int reps, int angle_count,
                             uint64_t seed, int workers) {
    if (angle_count < 3) throw std::invalid_argument("shape_estimate: need at least 3 angles");
    if (reps < 2) throw std::invalid_argument("shape_estimate: need reps >= 2");
    ShapeEstimate out;
    out.t = t;

    constexpr double pi = 3.14159265358979323846;
    for (int k = 0; k < angle_count; ++k) {
        double theta = (pi / 2.0) * double(k) / double(angle_count - 1);
        // Largest integer radius whose mean passage time stays below t.
        // Mean time is monotone in the radius up to lattice rounding, so a
        // bracketed binary search is adequate.
        double lo = 1.0, hi = 2.0 * t;  // weights >= 1: reach <= t; generous upper bracket
        while (hi - lo > 1.0) {
            double mid = std::floor((lo + hi) / 2.0);
            double mt = mean_time_at(dist, theta, mid, reps, seed, workers);
            if (mt <= t)
                lo = mid;
            else
                hi = mid;
        }
        ShapeAngleSample s;
        s.theta = theta;
        // Report the accepted lattice vertex itself, not the real-valued
        // search parameter: its norms are what the reach set attains.
        Vertex v = Direction::angle(theta).target(std::max(1, int(std::lround(lo))));
        s.rho_over_t = std::hypot(double(v.x), double(v.y)) / t;
        s.rho_ci = {(std::hypot(double(v.x), double(v.y)) - 1.0) / t,
                    (std::hypot(double(v.x), double(v.y)) + 1.0) / t};
        s.l1_radius = double(std::abs(v.x) + std::abs(v.y)) / t;
        out.boundary.push_back(s);
    }

    // Flat-edge detection: angles whose l1-radius reaches 1 within the
    // bracketing tolerance, compared against the predicted window.
    out.flat_tolerance = 2.0 / t;
    bool found = false;
    for (const auto& s : out.boundary) {
        if (s.l1_radius >= 1.0 - out.flat_tolerance) {
            if (!found) out.flat_lo = s.theta;
            out.flat_hi = s.theta;
            found = true;
        }
    }
    out.flat_edge_detected = found;

    double p = dist.atom_at_one();
    if (p > 0.0 && p < 1.0) {
        auto alpha = estimate_alpha(p, 400, 40, seed ^ 0xa1fa);
        out.alpha_hat = alpha.status == AlphaStatus::subcritical ? 0.0 : std::max(0.0, alpha.est.point);
        double clamped = std::min(out.alpha_hat, 0.70710678118654752440);
        auto [t1, t2] = theta_flat(clamped);
        out.theta1_hat = t1;
        out.theta2_hat = t2;
    }
    return out;
}

CensusParams derive_census_params(const DistributionSpec& dist, int M, double delta,
                                  std::optional<double> z_override,
                                  std::optional<double> length_factor_override, uint64_t seed,
                                  int workers) {
    if (M < 1) throw std::invalid_argument("derive_census_params: M must be >= 1");
    if (!(delta > 0.0)) throw std::invalid_argument("derive_census_params: delta must be > 0");
    CensusParams out;

    // Pilot time constant on a reserved replicate block.
    auto times = sample_passage_times(dist, Direction::axis(), 100, 30, seed, workers,
                                      kAuxReplicateBlock);
    std::vector<double> ratios(times.size());
    for (size_t i = 0; i < times.size(); ++i) ratios[i] = times[i] / 100.0;
    out.mu_hat = stats::mean(ratios);
    out.length_factor = length_factor_override ? *length_factor_override : 3.0 * out.mu_hat;
    // The solved mass budget is only consulted where the CDF carries mass
    // just above 1: two_point is flat on (1,b), so any z there works and the
    // canonical midpoint is used directly (the budget itself can underflow
    // for legitimate delta/N without affecting it).
    if (z_override) {
        out.z = *z_override;
        out.mass_cap = 0.0;
    } else {
        switch (dist.family) {
            case DistFamily::constant_one:
            case DistFamily::two_point:
                out.mass_cap = 0.0;
                out.z = dist.family == DistFamily::two_point ? (1.0 + dist.b) / 2.0 : 2.0;
                break;
            default:
                out.mass_cap = mass_budget(delta, M, out.length_factor);
                out.z = weight_threshold(dist, out.mass_cap);
        }
    }

    double p = dist.atom_at_one();
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    if (p > 0.0 && p < 1.0) {
        auto alpha = estimate_alpha(p, 400, 40, seed ^ 0xa1fa);
        out.alpha_hat = alpha.status == AlphaStatus::subcritical ? 0.0 : std::max(0.0, alpha.est.point);
        if (out.alpha_hat > inv_sqrt2) {
            out.alpha_hat = inv_sqrt2;
            out.alpha_clamped = true;
        }
    } else {
        out.alpha_hat = p >= 1.0 ? inv_sqrt2 : 0.0;
        out.alpha_clamped = p >= 1.0;
    }
    auto [t1, t2] = theta_flat(out.alpha_hat);
    (void)t2;
    out.tan_theta1 = std::tan(t1);
    double eta_hat = 1.0 + out.tan_theta1 - out.mu_hat;
    out.delta1 = eta_hat > 0.0 ? eta_hat / 100.0 : 1e-3;
    if (out.delta1 >= out.tan_theta1) out.delta1 = out.tan_theta1 / 2.0;
    if (!(out.delta1 > 0.0)) {
        // Degenerate corner (alpha at the clamp, theta1 = 0): fall back to
        // the alpha = 0 classification geometry.
        out.tan_theta1 = 1.0;
        out.delta1 = 0.01;
    }
    return out;
}

CensusExperiment theorem1_experiment(const DistributionSpec& dist, int n, int m, int M,
                                     double delta, std::optional<double> z_override, int reps,
                                     uint64_t seed, int workers, uint32_t replicate_offset,
                                     std::optional<double> length_factor_override) {
    if (n < 2 || m < 1 || m >= n) throw std::invalid_argument("theorem1_experiment: need 1 <= m < n");
    if (reps < 3) throw std::invalid_argument("theorem1_experiment: need reps >= 3");
    CensusExperiment out;
    out.n = n;
    out.m = m;
    out.M = M;
    out.params =
        derive_census_params(dist, M, delta, z_override, length_factor_override, seed, workers);
    out.window_warning = !(m <= n / 2 && std::pow(double(n), 2.0 / 3.0) <= double(m) + 1e-9);

    out.rows.assign(size_t(reps), CensusReplicate{});
    const CensusParams& par = out.params;
    parallel_replicates(reps, workers, [&](int i) {
        CensusReplicate row;
        row.rep = i;
        Configuration c(seed, dist, replicate_offset + uint32_t(i));
        auto [region, res] = auto_region(c, {0, 0}, {n, 0}, default_margin(n));
        row.time = res.time;
        auto weight = [&c](EdgeId e) { return c.weight_at(e); };
        auto bridges = find_broken_bridges(res.path, M);
        row.bridge_count = int(bridges.size());
        auto marks = mark_vertices(res.path, weight, M, par.z, bridges);
        auto counts = census(marks, m);
        row.count = counts.marked;
        row.count_z = counts.marked_z;
        row.report = build_renorm_report(res.path, bridges, marks, M, m, n, par.z, par.tan_theta1,
                                         par.delta1);
        row.flat_count = row.report.flat_count;
        row.fattened = row.report.fattened_count;
        row.exits_top_bottom = row.report.exits_top_bottom_first;
        row.family_counts = row.report.family_counts;
        int64_t total = 0;
        for (int64_t v : row.family_counts) total += v;
        row.census_bound_ok = total * int64_t(M) * M >= row.count_z;
        row.structure_error = verify_bridge_structure(res.path, bridges, M, weight, true);
        if (row.structure_error.empty()) {
            auto [prefix, suffix] = split_at_line(res.path, m);
            row.structure_error = verify_renorm_invariants(row.report, prefix, bridges);
        }
        if (row.structure_error.empty()) {
            LatticePath surgery = gamma_m(res.path, bridges, m);
            row.structure_error = check_good_crossings_are_one_paths(row.report, surgery, weight);
        }
        row.structure_ok = row.structure_error.empty();
        out.rows[size_t(i)] = std::move(row);
    });

    std::vector<double> ratios, ratios_1;
    for (const auto& row : out.rows) {
        ratios.push_back(double(row.count_z) / double(m));
        ratios_1.push_back(double(row.count) / double(m));
        if (!row.census_bound_ok) ++out.census_bound_violations;
        if (!row.structure_ok) ++out.structure_violations;
    }
    auto fill = [&](const std::vector<double>& v) {
        EstimateCI e;
        e.point = stats::mean(v);
        auto ci = stats::mean_ci(v);
        e.ci_low = ci.lo;
        e.ci_high = ci.hi;
        e.reps = reps;
        e.n_used = n;
        e.seed = seed;
        return e;
    };
    out.ratio = fill(ratios);
    out.ratio_1 = fill(ratios_1);
    return out;
}

}  // namespace fpp
