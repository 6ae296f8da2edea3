#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mplab/experiment/config.hpp"
#include "mplab/experiment/csv.hpp"

namespace mplab::experiment {

struct ResultSet {
    std::vector<std::pair<long, Table>> tables;  // one table per N
    std::map<std::string, double> summary;       // headline numbers for the JSON summary
};

// Runs the experiment in memory. Throws ConfigError on invalid input and
// InvariantViolation when an asserted identity or bound fails.
ResultSet execute(const ExperimentConfig& cfg, int workers);

// Writes {kind}-{N}-{seed}.csv per table and {kind}-{seed}-summary.json; returns the paths.
std::vector<std::filesystem::path> emit_results(const ResultSet& results, const ExperimentConfig& cfg,
                                                const std::filesystem::path& dir,
                                                double wall_clock_seconds, int workers);

struct RunOutcome {
    int exit_code = 0;  // 0 success, 1 validation failure, 2 invariant violation or I/O failure
    std::string message;
    std::vector<std::filesystem::path> files;
};

// Worker count: MPLAB_WORKERS when set to a positive integer, else cfg.workers.
int effective_workers(const ExperimentConfig& cfg);

RunOutcome run_experiment(const ExperimentConfig& cfg);

}  // namespace mplab::experiment
