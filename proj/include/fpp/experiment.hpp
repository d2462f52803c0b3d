#pragma once

// Experiment runner: flat key=value configs, dispatch of the experiment
// kinds, deterministic replicate-parallel execution, and the results /
// summary / manifest file set. Results files are byte-identical across
// reruns of the same config and across worker counts.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fpp/estimators.hpp"
#include "fpp/weights.hpp"

namespace fpp {

inline constexpr const char* kToolVersion = "0.1.0";

struct ExperimentConfig {
    std::string kind;  // geodesic | bridge-stats | right-edge | variance-scan | shape | theorem1
    DistributionSpec dist = DistributionSpec::two_point(0.8, 3.0);
    std::vector<int> n_list{200};
    std::vector<int> m_list{100};
    int M = 3;
    std::optional<double> z;
    double delta = 0.05;
    std::optional<double> length_factor;  // derived as 3*mu_hat when absent
    int reps = 100;
    uint64_t master_seed = 1;
    int workers = 0;  // 0 = hardware concurrency
    std::string out_dir;
    Direction direction = Direction::axis();
    std::optional<double> p;  // right-edge openness; defaults to the dist atom
    std::optional<double> t;  // shape time budget; derived when absent
    int angles = 24;
    int emit_paths = 0;  // geodesic: export the first k paths as CSV files

    int n() const { return n_list.at(0); }
    int m() const { return m_list.at(0); }

    // Canonical flat text form; parse(canonical()) round-trips.
    std::string canonical() const;
    static ExperimentConfig parse_text(const std::string& text);
    static ExperimentConfig load_file(const std::string& path);
    // Apply one key=value override (CLI flags win over the file).
    void set(const std::string& key, const std::string& value);

    // Throws std::invalid_argument naming the violated precondition.
    void validate() const;
};

uint64_t fnv1a64(const std::string& text);
std::string hex64(uint64_t v);

struct RunResult {
    int exit_code = 0;  // 0 ok, 2 validation error, 3 region certification failure
    std::string error;
    std::vector<std::string> files_written;
};

// Executes the experiment and writes results.csv, summary.json and
// manifest.json under config.out_dir. Existing output files abort the run
// (exit 2); partial results of failed runs land in out_dir/quarantine.
RunResult run(const ExperimentConfig& config);

// Plot-ready (x, y, ci_low, ci_high) extraction from a results.csv.
// kind: variance | right-edge | shape | census.
void emit_plot_data(const std::string& results_path, const std::string& plot_kind,
                    const std::string& out_path);

}  // namespace fpp
