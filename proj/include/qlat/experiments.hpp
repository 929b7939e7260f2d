#pragma once

// Experiment runners: config in, ResultTable out.

#include <optional>
#include <string>
#include <vector>

#include "qlat/config.hpp"
#include "qlat/results.hpp"

namespace qlat {

ResultTable run_experiment(const ExperimentConfig& cfg);

ResultTable run_light_cone(const ExperimentConfig& cfg);
ResultTable run_obstruction_sweep(const ExperimentConfig& cfg);
ResultTable run_twist_covariance(const ExperimentConfig& cfg);
ResultTable run_spectrum(const ExperimentConfig& cfg);
ResultTable run_return_to_equilibrium(const ExperimentConfig& cfg);
ResultTable run_projector_dynamics(const ExperimentConfig& cfg);

// Runs and writes <output>/<experiment>.csv/.json; returns the CSV path.
std::string run_and_write(const ExperimentConfig& cfg);

struct SweepOptions {
    std::string output;  // overrides the base config's output when non-empty
    int workers = 1;
    std::optional<std::uint64_t> seed;
    std::string precision;  // overrides when non-empty
};

struct SweepCell {
    std::string hash;
    std::string label;   // "key=value;..." for the swept keys
    std::string status;  // ok | skipped | error:<kind>
    std::string csv;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    std::string index_path;
    int failures = 0;
};

// The base document may carry a top-level `sweep:` mapping from dotted key
// paths to value lists; cells are the cartesian product in key order.
// Completed cells (present in the index with status ok and an existing CSV)
// are skipped.
SweepResult run_sweep(const std::string& config_path, const SweepOptions& opts);
std::vector<std::pair<std::string, ExperimentConfig>> expand_sweep(const std::string& yaml_text);

}  // namespace qlat
