#include "fpp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fpp/weights.hpp"

namespace fpp::stats {

double mean(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("mean: empty sample");
    double s = 0.0;
    for (double v : x) s += v;
    return s / double(x.size());
}

double sample_variance(const std::vector<double>& x) {
    size_t n = x.size();
    if (n < 2) throw std::invalid_argument("sample_variance: need at least 2 samples");
    double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / double(n - 1);
}

double stddev(const std::vector<double>& x) { return std::sqrt(sample_variance(x)); }

double sem(const std::vector<double>& x) {
    return stddev(x) / std::sqrt(double(x.size()));
}

Interval mean_ci(const std::vector<double>& x, double z_crit) {
    double m = mean(x);
    double s = x.size() > 1 ? sem(x) : 0.0;
    return {m - z_crit * s, m + z_crit * s};
}

VarianceEstimate jackknife_variance(const std::vector<double>& x, double z_crit) {
    size_t n = x.size();
    if (n < 3) throw std::invalid_argument("jackknife_variance: need at least 3 samples");
    double s1 = 0.0, s2 = 0.0;
    for (double v : x) {
        s1 += v;
        s2 += v * v;
    }
    // Leave-one-out variances from running sums.
    std::vector<double> loo(n);
    double loo_mean = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double r1 = s1 - x[i];
        double r2 = s2 - x[i] * x[i];
        double m = r1 / double(n - 1);
        loo[i] = (r2 - double(n - 1) * m * m) / double(n - 2);
        loo_mean += loo[i];
    }
    loo_mean /= double(n);
    double jvar = 0.0;
    for (double v : loo) jvar += (v - loo_mean) * (v - loo_mean);
    jvar *= double(n - 1) / double(n);

    VarianceEstimate est;
    est.variance = sample_variance(x);
    est.jackknife_se = std::sqrt(jvar);
    est.ci = {est.variance - z_crit * est.jackknife_se, est.variance + z_crit * est.jackknife_se};
    return est;
}

Interval bootstrap_mean_ci(const std::vector<double>& x, uint64_t seed, int resamples,
                           double level) {
    if (x.empty()) throw std::invalid_argument("bootstrap: empty sample");
    size_t n = x.size();
    std::vector<double> means;
    means.reserve(resamples);
    uint64_t state = seed;
    auto next = [&state] {
        state += 0x9e3779b97f4a7c15ull;
        return mix64(state);
    };
    for (int b = 0; b < resamples; ++b) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += x[next() % n];
        means.push_back(s / double(n));
    }
    std::sort(means.begin(), means.end());
    double tail = (1.0 - level) / 2.0;
    auto at = [&](double q) {
        double pos = q * double(resamples - 1);
        size_t k = size_t(pos);
        return means[std::min(k, means.size() - 1)];
    };
    return {at(tail), at(1.0 - tail)};
}

LineFit weighted_line_fit(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& w, double z_crit) {
    size_t n = x.size();
    if (n < 2 || y.size() != n || w.size() != n)
        throw std::invalid_argument("weighted_line_fit: need >= 2 points, equal lengths");
    double sw = 0.0, swx = 0.0, swy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sw += w[i];
        swx += w[i] * x[i];
        swy += w[i] * y[i];
    }
    double xbar = swx / sw, ybar = swy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
        sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
    }
    if (sxx == 0.0) throw std::invalid_argument("weighted_line_fit: degenerate x values");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    // With w_i = 1/se_i^2 the slope variance is 1/sxx.
    fit.slope_se = std::sqrt(1.0 / sxx);
    fit.slope_ci = {fit.slope - z_crit * fit.slope_se, fit.slope + z_crit * fit.slope_se};
    return fit;
}

KsResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf,
                       double alpha) {
    size_t n = sample.size();
    if (n == 0) throw std::invalid_argument("ks: empty sample");
    std::sort(sample.begin(), sample.end());
    double d = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double f = cdf(sample[i]);
        d = std::max(d, f - double(i) / double(n));
        d = std::max(d, double(i + 1) / double(n) - f);
    }
    KsResult r;
    r.statistic = d;
    r.critical = std::sqrt(-std::log(alpha / 2.0) / (2.0 * double(n)));
    r.pass = d <= r.critical;
    return r;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    KsResult r;
    r.statistic = d;
    double na = double(a.size()), nb = double(b.size());
    r.critical = std::sqrt(-std::log(alpha / 2.0) / 2.0) * std::sqrt((na + nb) / (na * nb));
    r.pass = d <= r.critical;
    return r;
}

}  // namespace fpp::stats
