#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tegsim/config.hpp"
#include "tegsim/io.hpp"

namespace tegsim {

// Process exit codes shared by every subcommand.
inline constexpr int exit_ok = 0;
inline constexpr int exit_internal = 1; // an invariant the engine itself enforces broke
inline constexpr int exit_config = 2;   // bad config, bad input data, bad usage
inline constexpr int exit_adverse = 3;  // the analysis found what it was hunting for

// Everything one run produces, before any file is written.
struct ScenarioArtifacts {
    std::vector<SnapshotRow> snapshots;
    std::vector<MetricsRow> metrics;
    std::vector<PairwiseRow> pairwise;
    std::vector<BargainingRow> bargaining;
    double supply_initial = 0;
    double supply_final = 0;
};

ScenarioArtifacts execute_scenario(const ScenarioConfig& cfg);

struct RunOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed; // overrides the config's seed
    std::string out_dir = "tegsim_out";
};

// Runs the scenario and writes snapshots.csv, metrics.csv, pairwise.csv,
// bargaining.csv and manifest.json into out_dir. The manifest carries an
// FNV-1a fingerprint per file and no timestamps or absolute paths, so two
// runs of the same config and seed produce byte-identical directories.
int run_command(const RunOptions& opts);

struct AnalyzeOptions {
    std::string mode; // zeta | arbitrage | theorem-b | entropy
    std::string input;
    std::string kappa;       // optional layer_a,layer_b,kappa file
    std::string mu;          // optional layer_a,layer_b,mu file
    double tol = 1e-9;       // arbitrage gain threshold
    std::vector<int> active; // zeta: slots to average over (empty = all)
};

// Reads the input table(s), prints findings to `out`, and returns exit_adverse
// when an arbitrage cycle or a structural counterexample is found.
int analyze_command(const AnalyzeOptions& opts, std::ostream& out);

struct BatchOptions {
    std::string config_path;
    std::uint64_t seed_from = 0;
    std::uint64_t seed_to = 0;
    std::string out_dir = "tegsim_batch";
    int jobs = 4;
};

// One full run per seed in [seed_from, seed_to], each into out_dir/seed_<s>/,
// spread over a small worker pool. Returns the worst per-run exit code.
int batch_command(const BatchOptions& opts);

} // namespace tegsim
