#pragma once

// Small statistics toolkit: moments, delete-one jackknife for the sample
// variance, percentile bootstrap for means, least-squares fits and
// Kolmogorov-Smirnov tests.

#include <cstdint>
#include <functional>
#include <vector>

namespace fpp::stats {

double mean(const std::vector<double>& x);
// Unbiased sample variance (divisor n-1).
double sample_variance(const std::vector<double>& x);
double stddev(const std::vector<double>& x);
// Standard error of the mean.
double sem(const std::vector<double>& x);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double v) const { return lo <= v && v <= hi; }
    bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

}  // namespace fpp::stats

namespace fpp {

// A Monte Carlo point estimate with confidence interval and provenance.
struct EstimateCI {
    double point = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    int reps = 0;
    int n_used = 0;
    uint64_t seed = 0;
};

}  // namespace fpp

namespace fpp::stats {

// Normal-theory CI for the mean at +-z_crit standard errors.
Interval mean_ci(const std::vector<double>& x, double z_crit = 1.96);

// Delete-one jackknife CI for the unbiased sample variance. Passage-time
// samples are skewed at the sizes we run, so this is preferred over the
// chi-square interval.
struct VarianceEstimate {
    double variance = 0.0;
    double jackknife_se = 0.0;
    Interval ci;
};
VarianceEstimate jackknife_variance(const std::vector<double>& x, double z_crit = 1.96);

// Percentile bootstrap CI for the mean; deterministic given `seed`.
Interval bootstrap_mean_ci(const std::vector<double>& x, uint64_t seed, int resamples = 1000,
                           double level = 0.95);

// Weighted least squares y ~ a + b x, weights w_i (typically 1/se_i^2).
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double slope_se = 0.0;
    Interval slope_ci;
};
LineFit weighted_line_fit(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& w, double z_crit = 1.96);

// One-sample KS test of `sample` against a CDF; returns the statistic.
// passes_at(alpha) uses the asymptotic critical value, conservative for
// discrete data.
struct KsResult {
    double statistic = 0.0;
    double critical = 0.0;
    bool pass = false;
};
KsResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf,
                       double alpha);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha);

}  // namespace fpp::stats
