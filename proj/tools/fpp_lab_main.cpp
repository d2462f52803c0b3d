// fpp-lab: experiment runner for first-passage percolation studies on the
// square lattice. Subcommands map to experiment kinds; every run writes
// results.csv, summary.json and manifest.json into --out. All randomness is
// derived from (seed, replicate index), so reruns and different worker
// counts produce byte-identical results files.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fpp/experiment.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string dist, n, m, direction, out;
    std::string z, delta, length_factor, reps, seed, workers, M, p, t, angles, emit_paths;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "config file (key = value lines)");
    cmd->add_option("--dist", f.dist, "distribution, e.g. two_point(p=0.8,b=3)");
    cmd->add_option("--n", f.n, "n or comma list");
    cmd->add_option("--m", f.m, "census box half-side m or comma list");
    cmd->add_option("--M", f.M, "bridge/renormalization scale M");
    cmd->add_option("--z", f.z, "weight threshold z > 1 (derived when absent)");
    cmd->add_option("--delta", f.delta, "density parameter for the threshold solver");
    cmd->add_option("--length-factor", f.length_factor, "path length factor (derived when absent)");
    cmd->add_option("--reps", f.reps, "replicates");
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--workers", f.workers, "worker threads (0 = hardware)");
    cmd->add_option("--direction", f.direction, "axis | diagonal | angle:<radians>");
    cmd->add_option("--p", f.p, "oriented edge openness (right-edge)");
    cmd->add_option("--t", f.t, "shape time budget");
    cmd->add_option("--angles", f.angles, "shape angular resolution");
    cmd->add_option("--emit-paths", f.emit_paths, "geodesic: export first k paths as CSV");
    cmd->add_option("--out", f.out, "output directory");
}

int run_kind(const std::string& kind, const CommonFlags& f) {
    fpp::ExperimentConfig cfg;
    try {
        if (!f.config_path.empty()) cfg = fpp::ExperimentConfig::load_file(f.config_path);
        cfg.kind = kind;
        // Flags win over the config file.
        if (!f.dist.empty()) cfg.set("dist", f.dist);
        if (!f.n.empty()) cfg.set("n", f.n);
        if (!f.m.empty()) cfg.set("m", f.m);
        if (!f.M.empty()) cfg.set("M", f.M);
        if (!f.z.empty()) cfg.set("z", f.z);
        if (!f.delta.empty()) cfg.set("delta", f.delta);
        if (!f.length_factor.empty()) cfg.set("length_factor", f.length_factor);
        if (!f.reps.empty()) cfg.set("reps", f.reps);
        if (!f.seed.empty()) cfg.set("seed", f.seed);
        if (!f.workers.empty()) cfg.set("workers", f.workers);
        if (!f.direction.empty()) cfg.set("direction", f.direction);
        if (!f.p.empty()) cfg.set("p", f.p);
        if (!f.t.empty()) cfg.set("t", f.t);
        if (!f.angles.empty()) cfg.set("angles", f.angles);
        if (!f.emit_paths.empty()) cfg.set("emit_paths", f.emit_paths);
        if (!f.out.empty()) cfg.set("out", f.out);
        // Environment override for the worker count (flag still wins).
        if (f.workers.empty()) {
            if (const char* env = std::getenv("FPP_LAB_WORKERS")) cfg.set("workers", env);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    fpp::RunResult res = fpp::run(cfg);
    if (res.exit_code != 0) {
        std::cerr << "error: " << res.error << "\n";
    } else {
        for (const auto& file : res.files_written) std::cout << file << "\n";
    }
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"first-passage percolation lab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", fpp::kToolVersion);

    const char* kinds[] = {"geodesic", "bridge-stats", "right-edge", "variance-scan", "shape",
                           "theorem1"};
    const char* descriptions[] = {
        "optimal paths to (n,0) over certified regions",
        "broken-bridge statistics and mark censuses of optimal paths",
        "oriented-percolation right-edge traces and the speed estimate",
        "passage-time variance against n by direction",
        "boundary of the reach set and flat-edge report",
        "marked-vertex census experiment over the box side list m",
    };
    CommonFlags flags[6];
    for (int k = 0; k < 6; ++k) add_common(app.add_subcommand(kinds[k], descriptions[k]), flags[k]);

    std::string plot_results, plot_kind, plot_out;
    auto* emit = app.add_subcommand("emit-plot", "extract (x, y, ci_low, ci_high) plot data");
    emit->add_option("--results", plot_results, "results.csv from a completed run")->required();
    emit->add_option("--kind", plot_kind, "variance | right-edge | shape | census")->required();
    emit->add_option("--out", plot_out, "output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    for (int k = 0; k < 6; ++k)
        if (app.get_subcommand(kinds[k])->parsed()) return run_kind(kinds[k], flags[k]);

    if (emit->parsed()) {
        try {
            fpp::emit_plot_data(plot_results, plot_kind, plot_out);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
        std::cout << plot_out << "\n";
        return 0;
    }
    return 0;
}
