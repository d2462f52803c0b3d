#include "fpp/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "fpp/bridges.hpp"
#include "fpp/geodesics.hpp"
#include "fpp/oriented.hpp"
#include "fpp/parallel.hpp"
#include "fpp/renorm.hpp"
#include "fpp/stats.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace fpp {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (const auto& part : split(s, ',')) {
        std::string v = trim(part);
        if (v.empty()) continue;
        out.push_back(std::stoi(v));
    }
    if (out.empty()) throw std::invalid_argument("expected a number or comma list");
    return out;
}

std::string int_list_str(const std::vector<int>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

}  // namespace

std::string ExperimentConfig::canonical() const {
    std::ostringstream os;
    os << "experiment = " << kind << "\n";
    os << "dist = " << dist.to_string() << "\n";
    os << "n = " << int_list_str(n_list) << "\n";
    os << "m = " << int_list_str(m_list) << "\n";
    os << "M = " << M << "\n";
    if (z) os << "z = " << fmt(*z) << "\n";
    os << "delta = " << fmt(delta) << "\n";
    if (length_factor) os << "length_factor = " << fmt(*length_factor) << "\n";
    os << "reps = " << reps << "\n";
    os << "seed = " << master_seed << "\n";
    os << "direction = " << direction.name() << "\n";
    if (p) os << "p = " << fmt(*p) << "\n";
    if (t) os << "t = " << fmt(*t) << "\n";
    os << "angles = " << angles << "\n";
    os << "emit_paths = " << emit_paths << "\n";
    return os.str();
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (key == "experiment") kind = value;
    else if (key == "dist") dist = DistributionSpec::parse(value);
    else if (key == "n") n_list = parse_int_list(value);
    else if (key == "m") m_list = parse_int_list(value);
    else if (key == "M") M = std::stoi(value);
    else if (key == "z") z = std::stod(value);
    else if (key == "delta") delta = std::stod(value);
    else if (key == "length_factor") length_factor = std::stod(value);
    else if (key == "reps") reps = std::stoi(value);
    else if (key == "seed") master_seed = std::stoull(value);
    else if (key == "workers") workers = std::stoi(value);
    else if (key == "out") out_dir = value;
    else if (key == "direction") direction = Direction::parse(value);
    else if (key == "p") p = std::stod(value);
    else if (key == "t") t = std::stod(value);
    else if (key == "angles") angles = std::stoi(value);
    else if (key == "emit_paths") emit_paths = std::stoi(value);
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected 'key = value', got '" + line + "'");
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

void ExperimentConfig::validate() const {
    static const std::vector<std::string> kinds{"geodesic",      "bridge-stats", "right-edge",
                                                "variance-scan", "shape",        "theorem1"};
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
        throw std::invalid_argument("config: unknown experiment kind '" + kind + "'");
    dist.validate();
    if (n_list.empty()) throw std::invalid_argument("config: n list empty");
    for (int n : n_list)
        if (n < 1) throw std::invalid_argument("config: n must be >= 1 (violated precondition n >= 1)");
    for (size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1])
            throw std::invalid_argument("config: n list must be strictly increasing");
    for (int m : m_list)
        if (m < 1) throw std::invalid_argument("config: m must be >= 1 (violated precondition m >= 1)");
    if (M < 1) throw std::invalid_argument("config: M must be >= 1 (violated precondition M >= 1)");
    if (reps < 1) throw std::invalid_argument("config: reps must be >= 1");
    if (!(delta > 0.0)) throw std::invalid_argument("config: delta must be > 0");
    if (z && !(*z > 1.0)) throw std::invalid_argument("config: z must be > 1");
    if (p && (*p < 0.0 || *p > 1.0)) throw std::invalid_argument("config: p must lie in [0,1]");
    if (t && !(*t > 0.0)) throw std::invalid_argument("config: t must be > 0");
    if (angles < 3) throw std::invalid_argument("config: angles must be >= 3");
    if (workers < 0) throw std::invalid_argument("config: workers must be >= 0");
    if (out_dir.empty()) throw std::invalid_argument("config: out directory required");
    if (kind == "theorem1") {
        for (int m : m_list)
            if (m >= n()) throw std::invalid_argument("config: theorem1 needs m < n");
        if (reps < 3) throw std::invalid_argument("config: theorem1 needs reps >= 3");
    }
    if (kind == "variance-scan" && reps < 3)
        throw std::invalid_argument("config: variance-scan needs reps >= 3");
    if (kind == "right-edge" && !p && dist.atom_at_one() <= 0.0)
        throw std::invalid_argument("config: right-edge needs p or a distribution with an atom at 1");
}

uint64_t fnv1a64(const std::string& text) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
    return buf;
}

namespace {

struct Outputs {
    // name -> content, written together on success
    std::vector<std::pair<std::string, std::string>> files;
    nlohmann::json summary;

    void add(const std::string& name, std::string content) {
        files.emplace_back(name, std::move(content));
    }
};

std::string iso_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&tt));
    return buf;
}

// ---- experiment bodies --------------------------------------------------

Outputs run_geodesic(const ExperimentConfig& cfg) {
    Outputs out;
    int n = cfg.n();
    std::vector<PassageResult> results(size_t(cfg.reps));
    parallel_replicates(cfg.reps, cfg.workers, [&](int i) {
        Configuration c(cfg.master_seed, cfg.dist, uint32_t(i));
        auto [region, res] = auto_region(c, {0, 0}, {n, 0}, std::max(8, n / 16));
        results[size_t(i)] = std::move(res);
    });
    std::string csv = "rep,time,path_vertices,boundary_margin,x_min,x_max,y_min,y_max\n";
    std::vector<double> times;
    for (int i = 0; i < cfg.reps; ++i) {
        const auto& r = results[size_t(i)];
        csv += std::to_string(i) + "," + fmt(r.time) + "," + std::to_string(r.path.vertex_count()) +
               "," + std::to_string(r.boundary_margin) + "," + std::to_string(r.region_used.x_min) +
               "," + std::to_string(r.region_used.x_max) + "," + std::to_string(r.region_used.y_min) +
               "," + std::to_string(r.region_used.y_max) + "\n";
        times.push_back(r.time);
    }
    out.add("results.csv", csv);
    for (int i = 0; i < std::min(cfg.emit_paths, cfg.reps); ++i)
        out.add("path_" + std::to_string(i) + ".csv", path_to_csv(results[size_t(i)].path));

    auto ci = stats::mean_ci(times);
    out.summary = {{"n", n},
                   {"reps", cfg.reps},
                   {"mean_time", stats::mean(times)},
                   {"mean_time_ci", {ci.lo, ci.hi}},
                   {"mu_hat", stats::mean(times) / n},
                   // Finite-n means upper-bound the time constant in
                   // expectation (subadditivity); the bias shrinks with n.
                   {"mu_hat_bias", "upper"},
                   {"sample_record", nlohmann::json::parse(to_json(results[0]))}};
    return out;
}

Outputs run_bridge_stats(const ExperimentConfig& cfg) {
    Outputs out;
    int n = cfg.n();
    int m = cfg.m();
    auto params = derive_census_params(cfg.dist, cfg.M, cfg.delta, cfg.z, cfg.length_factor,
                                       cfg.master_seed, cfg.workers);
    struct Row {
        double time;
        int bridges;
        size_t d, sm, dz, smz;
        int64_t box, box_z;
        std::string structure;
    };
    std::vector<Row> rows(size_t(cfg.reps));
    parallel_replicates(cfg.reps, cfg.workers, [&](int i) {
        Configuration c(cfg.master_seed, cfg.dist, uint32_t(i));
        auto [region, res] = auto_region(c, {0, 0}, {n, 0}, std::max(8, n / 16));
        auto weight = [&c](EdgeId e) { return c.weight_at(e); };
        auto bridges = find_broken_bridges(res.path, cfg.M);
        auto marks = mark_vertices(res.path, weight, cfg.M, params.z, bridges);
        auto counts = census(marks, m);
        rows[size_t(i)] = Row{res.time,
                              int(bridges.size()),
                              marks.d.size(),
                              marks.s_m.size(),
                              marks.d_z.size(),
                              marks.s_m_z.size(),
                              counts.marked,
                              counts.marked_z,
                              verify_bridge_structure(res.path, bridges, cfg.M, weight, true)};
    });
    std::string csv = "rep,time,bridges,d,s_m,d_z,s_m_z,census_box,census_box_z,structure_ok\n";
    int violations = 0;
    std::vector<double> bridge_counts;
    for (int i = 0; i < cfg.reps; ++i) {
        const auto& r = rows[size_t(i)];
        if (!r.structure.empty()) ++violations;
        csv += std::to_string(i) + "," + fmt(r.time) + "," + std::to_string(r.bridges) + "," +
               std::to_string(r.d) + "," + std::to_string(r.sm) + "," + std::to_string(r.dz) + "," +
               std::to_string(r.smz) + "," + std::to_string(r.box) + "," + std::to_string(r.box_z) +
               "," + (r.structure.empty() ? "1" : "0") + "\n";
        bridge_counts.push_back(double(r.bridges));
    }
    out.add("results.csv", csv);
    out.summary = {{"n", n},
                   {"m", m},
                   {"M", cfg.M},
                   {"z", params.z},
                   {"mu_hat", params.mu_hat},
                   {"mean_bridges", stats::mean(bridge_counts)},
                   {"structure_violations", violations}};
    return out;
}

Outputs run_right_edge(const ExperimentConfig& cfg) {
    Outputs out;
    int n = cfg.n();
    double p = cfg.p ? *cfg.p : cfg.dist.atom_at_one();
    std::vector<RightEdgeTrace> traces(size_t(cfg.reps));
    parallel_replicates(cfg.reps, cfg.workers, [&](int i) {
        OrientedConfig oc(p, cfg.master_seed, uint32_t(i));
        traces[size_t(i)] = evolve_right_edge(oc, n);
    });
    std::string csv = "rep,level,r\n";
    std::vector<double> finals;
    int dead = 0, uncertified = 0;
    for (int i = 0; i < cfg.reps; ++i) {
        const auto& tr = traces[size_t(i)];
        if (!tr.certified) ++uncertified;
        for (size_t k = 0; k < tr.values.size(); ++k) {
            csv += std::to_string(i) + "," + std::to_string(k) + ",";
            csv += tr.values[k] == kRightEdgeDead ? "-inf" : std::to_string(tr.values[k]);
            csv += "\n";
        }
        if (tr.values.back() == kRightEdgeDead)
            ++dead;
        else
            finals.push_back(double(tr.values.back()) / double(n));
    }
    out.add("results.csv", csv);
    nlohmann::json alpha;
    if (finals.empty()) {
        alpha = {{"status", "subcritical"}, {"dead_replicates", dead}};
    } else {
        auto ci = finals.size() >= 2
                      ? stats::bootstrap_mean_ci(finals, cfg.master_seed ^ 0xb007u, 1000)
                      : stats::Interval{stats::mean(finals), stats::mean(finals)};
        double point = stats::mean(finals);
        alpha = {{"alpha_hat", point},
                 {"ci", {ci.lo, ci.hi}},
                 {"dead_replicates", dead},
                 {"status", ci.lo > 0.0 ? "supercritical" : "at-or-below-criticality"}};
    }
    out.summary = {{"n", n}, {"p", p}, {"reps", cfg.reps}, {"alpha", alpha},
                   {"uncertified_traces", uncertified}};
    return out;
}

Outputs run_variance_scan(const ExperimentConfig& cfg) {
    Outputs out;
    auto scan = variance_scan(cfg.dist, cfg.direction, cfg.n_list, cfg.reps, cfg.master_seed,
                              cfg.workers);
    std::string csv = "n,rep,time\n";
    for (size_t k = 0; k < scan.points.size(); ++k)
        for (int i = 0; i < cfg.reps; ++i)
            csv += std::to_string(scan.points[k].n) + "," + std::to_string(i) + "," +
                   fmt(scan.samples[k][size_t(i)]) + "\n";
    out.add("results.csv", csv);
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& pt : scan.points)
        pts.push_back({{"n", pt.n},
                       {"variance", pt.variance},
                       {"jackknife_se", pt.jackknife_se},
                       {"ci", {pt.ci.lo, pt.ci.hi}}});
    out.summary = {{"direction", cfg.direction.name()},
                   {"reps", cfg.reps},
                   {"points", std::move(pts)},
                   {"log_fit",
                    {{"slope", scan.log_fit.slope},
                     {"slope_se", scan.log_fit.slope_se},
                     {"slope_ci", {scan.log_fit.slope_ci.lo, scan.log_fit.slope_ci.hi}},
                     {"intercept", scan.log_fit.intercept}}}};
    return out;
}

Outputs run_shape(const ExperimentConfig& cfg) {
    Outputs out;
    double t;
    if (cfg.t) {
        t = *cfg.t;
    } else {
        auto mu = estimate_mu(cfg.dist, Direction::axis(), 60, 30, cfg.master_seed, cfg.workers);
        t = std::max(30.0 * mu.point, 40.0);
    }
    auto shape = shape_estimate(cfg.dist, t, cfg.reps, cfg.angles, cfg.master_seed, cfg.workers);
    std::string csv = "angle_index,theta,rho_over_t,ci_lo,ci_hi,l1_radius\n";
    for (size_t k = 0; k < shape.boundary.size(); ++k) {
        const auto& s = shape.boundary[k];
        csv += std::to_string(k) + "," + fmt(s.theta) + "," + fmt(s.rho_over_t) + "," +
               fmt(s.rho_ci.lo) + "," + fmt(s.rho_ci.hi) + "," + fmt(s.l1_radius) + "\n";
    }
    out.add("results.csv", csv);
    out.summary = {{"t", shape.t},
                   {"reps", cfg.reps},
                   {"angles", cfg.angles},
                   {"flat_edge_detected", shape.flat_edge_detected},
                   {"flat_window", {shape.flat_lo, shape.flat_hi}},
                   {"flat_tolerance", shape.flat_tolerance},
                   {"alpha_hat", shape.alpha_hat},
                   {"theta1_hat", shape.theta1_hat},
                   {"theta2_hat", shape.theta2_hat}};
    return out;
}

Outputs run_theorem1(const ExperimentConfig& cfg) {
    Outputs out;
    int n = cfg.n();
    std::string csv =
        "rep,m,time,count,count_z,bridges,flat_count,fattened,exits_top_bottom,census_bound_ok,"
        "structure_ok\n";
    std::string strips_csv = "rep,m,w1,class,v1_x,v1_y,v2_x,v2_y,crossing_vertices\n";
    std::string census_csv = "rep,m,s,qx,qy,count\n";
    nlohmann::json per_m = nlohmann::json::array();

    uint32_t offset = 0;
    nlohmann::json params_json;
    for (int m : cfg.m_list) {
        auto exp = theorem1_experiment(cfg.dist, n, m, cfg.M, cfg.delta, cfg.z, cfg.reps,
                                       cfg.master_seed, cfg.workers, offset, cfg.length_factor);
        offset += uint32_t(cfg.reps);  // disjoint replicate block per m
        for (const auto& row : exp.rows) {
            csv += std::to_string(row.rep) + "," + std::to_string(m) + "," + fmt(row.time) + "," +
                   std::to_string(row.count) + "," + std::to_string(row.count_z) + "," +
                   std::to_string(row.bridge_count) + "," + std::to_string(row.flat_count) + "," +
                   std::to_string(row.fattened) + "," + (row.exits_top_bottom ? "1" : "0") + "," +
                   (row.census_bound_ok ? "1" : "0") + "," + (row.structure_ok ? "1" : "0") + "\n";
            for (const auto& s : row.report.strips) {
                strips_csv += std::to_string(row.rep) + "," + std::to_string(m) + "," +
                              std::to_string(s.w1) + "," + strip_class_name(s.cls) + ",";
                if (s.has_crossing)
                    strips_csv += std::to_string(s.v1.x) + "," + std::to_string(s.v1.y) + "," +
                                  std::to_string(s.v2.x) + "," + std::to_string(s.v2.y) + "," +
                                  std::to_string(s.crossing_vertices);
                else
                    strips_csv += ",,,,";
                strips_csv += "\n";
            }
            for (int s = 0; s < 49; ++s) {
                SquareIndex q = family_shift(s);
                census_csv += std::to_string(row.rep) + "," + std::to_string(m) + "," +
                              std::to_string(s + 1) + "," + std::to_string(q.wx) + "," +
                              std::to_string(q.wy) + "," +
                              std::to_string(row.family_counts[size_t(s)]) + "\n";
            }
        }
        per_m.push_back({{"m", m},
                         {"mean_count_z_over_m", exp.ratio.point},
                         {"ratio_ci", {exp.ratio.ci_low, exp.ratio.ci_high}},
                         {"mean_count_over_m", exp.ratio_1.point},
                         {"ratio_1_ci", {exp.ratio_1.ci_low, exp.ratio_1.ci_high}},
                         {"census_bound_violations", exp.census_bound_violations},
                         {"structure_violations", exp.structure_violations},
                         {"window_warning", exp.window_warning}});
        params_json = {{"mu_hat", exp.params.mu_hat},
                       {"length_factor", exp.params.length_factor},
                       {"mass_cap", exp.params.mass_cap},
                       {"z", exp.params.z},
                       {"alpha_hat", exp.params.alpha_hat},
                       {"alpha_clamped", exp.params.alpha_clamped},
                       {"tan_theta1", exp.params.tan_theta1},
                       {"delta1", exp.params.delta1}};
    }
    out.add("results.csv", csv);
    out.add("strips.csv", strips_csv);
    out.add("census49.csv", census_csv);
    out.summary = {{"n", n}, {"M", cfg.M}, {"reps_per_m", cfg.reps}, {"params", params_json},
                   {"per_m", std::move(per_m)}};
    return out;
}

}  // namespace

RunResult run(const ExperimentConfig& config) {
    RunResult result;
    try {
        config.validate();
    } catch (const std::exception& e) {
        result.exit_code = 2;
        result.error = e.what();
        return result;
    }

    fs::path dir(config.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        result.exit_code = 2;
        result.error = "cannot create output directory: " + dir.string();
        return result;
    }
    for (const char* name : {"results.csv", "summary.json", "manifest.json"}) {
        if (fs::exists(dir / name)) {
            result.exit_code = 2;
            result.error = std::string("output file exists, refusing to overwrite: ") +
                           (dir / name).string();
            return result;
        }
    }

    std::string started = iso_now();
    Outputs out;
    try {
        if (config.kind == "geodesic") out = run_geodesic(config);
        else if (config.kind == "bridge-stats") out = run_bridge_stats(config);
        else if (config.kind == "right-edge") out = run_right_edge(config);
        else if (config.kind == "variance-scan") out = run_variance_scan(config);
        else if (config.kind == "shape") out = run_shape(config);
        else out = run_theorem1(config);
    } catch (const RegionCertificationError& e) {
        fs::create_directories(dir / "quarantine");
        std::ofstream q(dir / "quarantine" / "error.txt");
        q << e.what() << "\n";
        result.exit_code = 3;
        result.error = e.what();
        return result;
    } catch (const std::exception& e) {
        fs::create_directories(dir / "quarantine");
        std::ofstream q(dir / "quarantine" / "error.txt");
        q << e.what() << "\n";
        result.exit_code = 2;
        result.error = e.what();
        return result;
    }

    std::string config_text = config.canonical();
    uint64_t config_hash = fnv1a64(config_text);
    out.summary["config_hash"] = hex64(config_hash);
    out.summary["master_seed"] = config.master_seed;
    out.summary["experiment"] = config.kind;
    out.summary["dist"] = config.dist.to_string();
    out.add("summary.json", out.summary.dump(2) + "\n");
    out.add("config.txt", config_text);

    nlohmann::json files_json = nlohmann::json::object();
    for (const auto& [name, content] : out.files) files_json[name] = "fnv1a:" + hex64(fnv1a64(content));
    nlohmann::json manifest{{"config_hash", hex64(config_hash)},
                            {"tool_version", kToolVersion},
                            {"master_seed", config.master_seed},
                            {"started_utc", started},
                            {"finished_utc", iso_now()},
                            {"files", std::move(files_json)}};

    for (const auto& [name, content] : out.files) {
        std::ofstream f(dir / name, std::ios::binary);
        f << content;
        if (!f) {
            result.exit_code = 2;
            result.error = "failed writing " + (dir / name).string();
            return result;
        }
        result.files_written.push_back((dir / name).string());
    }
    std::ofstream mf(dir / "manifest.json", std::ios::binary);
    mf << manifest.dump(2) << "\n";
    result.files_written.push_back((dir / "manifest.json").string());
    return result;
}

// ---- plot emission --------------------------------------------------------

namespace {

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int col(const std::string& name) const {
        for (size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return int(i);
        return -1;
    }
};

Csv read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("emit-plot: cannot open '" + path + "'");
    Csv csv;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split(line, ',');
        if (first) {
            csv.header = fields;
            first = false;
        } else {
            csv.rows.push_back(fields);
        }
    }
    if (first) throw std::invalid_argument("emit-plot: empty results file");
    return csv;
}

void require_cols(const Csv& csv, const std::vector<std::string>& names, const std::string& kind) {
    for (const auto& n : names)
        if (csv.col(n) < 0)
            throw std::invalid_argument("emit-plot: results file does not match plot kind '" + kind +
                                        "' (missing column '" + n + "')");
}

}  // namespace

void emit_plot_data(const std::string& results_path, const std::string& plot_kind,
                    const std::string& out_path) {
    Csv csv = read_csv(results_path);
    std::string out = "x,y,ci_low,ci_high\n";

    if (plot_kind == "variance") {
        require_cols(csv, {"n", "rep", "time"}, plot_kind);
        std::map<int, std::vector<double>> by_n;
        for (const auto& r : csv.rows)
            by_n[std::stoi(r[size_t(csv.col("n"))])].push_back(std::stod(r[size_t(csv.col("time"))]));
        for (const auto& [n, times] : by_n) {
            auto est = stats::jackknife_variance(times);
            out += fmt(std::log(double(n))) + "," + fmt(est.variance) + "," + fmt(est.ci.lo) + "," +
                   fmt(est.ci.hi) + "\n";
        }
    } else if (plot_kind == "right-edge") {
        require_cols(csv, {"rep", "level", "r"}, plot_kind);
        std::map<int, std::vector<double>> by_level;
        for (const auto& r : csv.rows) {
            int level = std::stoi(r[size_t(csv.col("level"))]);
            const std::string& v = r[size_t(csv.col("r"))];
            if (level > 0 && v != "-inf") by_level[level].push_back(std::stod(v) / level);
        }
        for (const auto& [level, ratios] : by_level) {
            auto ci = ratios.size() >= 2 ? stats::mean_ci(ratios)
                                         : stats::Interval{ratios[0], ratios[0]};
            out += std::to_string(level) + "," + fmt(stats::mean(ratios)) + "," + fmt(ci.lo) + "," +
                   fmt(ci.hi) + "\n";
        }
    } else if (plot_kind == "shape") {
        require_cols(csv, {"theta", "rho_over_t", "ci_lo", "ci_hi"}, plot_kind);
        for (const auto& r : csv.rows)
            out += r[size_t(csv.col("theta"))] + "," + r[size_t(csv.col("rho_over_t"))] + "," +
                   r[size_t(csv.col("ci_lo"))] + "," + r[size_t(csv.col("ci_hi"))] + "\n";
    } else if (plot_kind == "census") {
        require_cols(csv, {"rep", "m", "count_z"}, plot_kind);
        std::map<int, std::vector<double>> by_m;
        for (const auto& r : csv.rows)
            by_m[std::stoi(r[size_t(csv.col("m"))])].push_back(
                std::stod(r[size_t(csv.col("count_z"))]));
        for (const auto& [m, counts] : by_m) {
            auto ci = counts.size() >= 2 ? stats::mean_ci(counts)
                                         : stats::Interval{counts[0], counts[0]};
            out += std::to_string(m) + "," + fmt(stats::mean(counts)) + "," + fmt(ci.lo) + "," +
                   fmt(ci.hi) + "\n";
        }
    } else {
        throw std::invalid_argument("emit-plot: unknown plot kind '" + plot_kind + "'");
    }

    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::invalid_argument("emit-plot: cannot write '" + out_path + "'");
    f << out;
}

}  // namespace fpp
