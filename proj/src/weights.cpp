#include "fpp/weights.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

namespace fpp {

DistributionSpec DistributionSpec::constant() {
    DistributionSpec s;
    s.family = DistFamily::constant_one;
    s.p = 1.0;
    return s;
}

DistributionSpec DistributionSpec::two_point(double p, double b) {
    DistributionSpec s;
    s.family = DistFamily::two_point;
    s.p = p;
    s.b = b;
    s.validate();
    return s;
}

DistributionSpec DistributionSpec::one_plus_exp(double rate) {
    DistributionSpec s;
    s.family = DistFamily::one_plus_exp;
    s.p = 0.0;
    s.rate = rate;
    s.validate();
    return s;
}

DistributionSpec DistributionSpec::one_plus_uniform(double width) {
    DistributionSpec s;
    s.family = DistFamily::one_plus_uniform;
    s.p = 0.0;
    s.width = width;
    s.validate();
    return s;
}

double DistributionSpec::atom_at_one() const {
    switch (family) {
        case DistFamily::constant_one: return 1.0;
        case DistFamily::two_point: return p;
        default: return 0.0;
    }
}

double DistributionSpec::cdf(double t) const {
    if (t < 1.0) return 0.0;
    switch (family) {
        case DistFamily::constant_one: return 1.0;
        case DistFamily::two_point: return t < b ? p : 1.0;
        case DistFamily::one_plus_exp: return 1.0 - std::exp(-rate * (t - 1.0));
        case DistFamily::one_plus_uniform:
            return t >= 1.0 + width ? 1.0 : (t - 1.0) / width;
    }
    return 1.0;
}

double DistributionSpec::quantile(double u) const {
    switch (family) {
        case DistFamily::constant_one: return 1.0;
        case DistFamily::two_point: return u < p ? 1.0 : b;
        case DistFamily::one_plus_exp: return 1.0 - std::log1p(-u) / rate;
        case DistFamily::one_plus_uniform: return 1.0 + u * width;
    }
    return 1.0;
}

double DistributionSpec::max_weight() const {
    switch (family) {
        case DistFamily::constant_one: return 1.0;
        case DistFamily::two_point: return b;
        case DistFamily::one_plus_exp: return std::numeric_limits<double>::infinity();
        case DistFamily::one_plus_uniform: return 1.0 + width;
    }
    return 1.0;
}

void DistributionSpec::validate() const {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("distribution: p outside [0,1]");
    switch (family) {
        case DistFamily::constant_one: break;
        case DistFamily::two_point:
            if (!(b > 1.0)) throw std::invalid_argument("two_point: b must be > 1");
            break;
        case DistFamily::one_plus_exp:
            if (!(rate > 0.0)) throw std::invalid_argument("one_plus_exp: rate must be > 0");
            break;
        case DistFamily::one_plus_uniform:
            if (!(width > 0.0)) throw std::invalid_argument("one_plus_uniform: width must be > 0");
            break;
    }
}

namespace {

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// key=value argument list inside "family(...)".
std::map<std::string, double> parse_args(const std::string& inner, const std::string& what) {
    std::map<std::string, double> args;
    size_t i = 0;
    auto skip_ws = [&] { while (i < inner.size() && std::isspace(uint8_t(inner[i]))) ++i; };
    while (true) {
        skip_ws();
        if (i >= inner.size()) break;
        size_t eq = inner.find('=', i);
        if (eq == std::string::npos) throw std::invalid_argument(what + ": expected key=value");
        std::string key = inner.substr(i, eq - i);
        while (!key.empty() && std::isspace(uint8_t(key.back()))) key.pop_back();
        size_t end = inner.find(',', eq);
        if (end == std::string::npos) end = inner.size();
        std::string val = inner.substr(eq + 1, end - eq - 1);
        try {
            args[key] = std::stod(val);
        } catch (const std::exception&) {
            throw std::invalid_argument(what + ": bad numeric value for '" + key + "'");
        }
        i = end + 1;
        if (end == inner.size()) break;
    }
    return args;
}

}  // namespace

std::string DistributionSpec::to_string() const {
    switch (family) {
        case DistFamily::constant_one: return "constant_one";
        case DistFamily::two_point:
            return "two_point(p=" + fmt_num(p) + ", b=" + fmt_num(b) + ")";
        case DistFamily::one_plus_exp: return "one_plus_exp(rate=" + fmt_num(rate) + ")";
        case DistFamily::one_plus_uniform:
            return "one_plus_uniform(width=" + fmt_num(width) + ")";
    }
    return "constant_one";
}

DistributionSpec DistributionSpec::parse(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(uint8_t(c))) s += c;
    if (s == "constant_one") return constant();

    size_t open = s.find('(');
    if (open == std::string::npos || s.back() != ')')
        throw std::invalid_argument("distribution: cannot parse '" + text + "'");
    std::string name = s.substr(0, open);
    std::string inner = s.substr(open + 1, s.size() - open - 2);
    auto args = parse_args(inner, name);

    auto need = [&](const char* key) {
        auto it = args.find(key);
        if (it == args.end())
            throw std::invalid_argument(name + ": missing parameter '" + std::string(key) + "'");
        return it->second;
    };
    if (name == "two_point") return two_point(need("p"), need("b"));
    if (name == "one_plus_exp") return one_plus_exp(need("rate"));
    if (name == "one_plus_uniform") return one_plus_uniform(need("width"));
    throw std::invalid_argument("distribution: unknown family '" + name + "'");
}

double mass_budget(double delta, int M, double N) {
    if (!(delta > 0.0) || M < 1 || !(N >= 0.0))
        throw std::invalid_argument("mass_budget: inputs must be positive (M >= 1, N >= 0)");
    // log q = (16/delta) * (-log 2 - N log(48 M))
    double log_q = (16.0 / delta) * (-std::log(2.0) - N * std::log(48.0 * M));
    double q = std::exp(log_q);
    if (q < std::numeric_limits<double>::min())
        throw std::underflow_error("mass_budget: threshold numerically zero");
    return q;
}

double weight_threshold(const DistributionSpec& spec, double mass_cap) {
    if (!(mass_cap > 0.0)) throw std::invalid_argument("weight_threshold: mass_cap must be > 0");
    double z = 1.0;
    switch (spec.family) {
        case DistFamily::constant_one:
            throw std::domain_error("weight_threshold: distribution has no 1+ mass");
        case DistFamily::two_point:
            // F is flat on (1,b): any z there works, midpoint is canonical.
            return (1.0 + spec.b) / 2.0;
        case DistFamily::one_plus_exp:
            if (mass_cap >= 1.0) throw std::invalid_argument("weight_threshold: mass_cap must be < 1");
            z = 1.0 - std::log1p(-mass_cap) / spec.rate;
            break;
        case DistFamily::one_plus_uniform:
            z = 1.0 + std::min(mass_cap, 1.0) * spec.width;
            break;
    }
    if (!(z > 1.0)) throw std::underflow_error("weight_threshold: threshold numerically at 1");
    return z;
}

}  // namespace fpp
