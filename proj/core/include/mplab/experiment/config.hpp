#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mplab/calibration.hpp"
#include "mplab/counting.hpp"
#include "mplab/ensemble.hpp"
#include "mplab/grid.hpp"

namespace mplab::experiment {

enum class Kind { identities, qf, law_scan, q_recursion, pleijel, counting, rigidity, inequalities, mp_eval };

std::string to_string(Kind kind);  // "law-scan", "mp-eval", ...
Kind parse_kind(std::string_view text);
const std::vector<Kind>& all_kinds();

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& message, int line = 0);
    int line() const { return line_; }

private:
    int line_;
};

struct ExperimentConfig {
    Kind kind = Kind::mp_eval;
    std::vector<long> N = {64};
    long replicas = 20;
    ensemble::EntryDistribution dist;
    std::uint64_t seed = 1;
    GridSpec grid = GridSpec::parse("E=2;eta=fixed:1");
    DomainParams domain;
    std::map<std::string, double> calibration = {{"bR_C", calibration::bR_C}};
    std::vector<double> K = {1.0, 2.0, 5.0, 10.0};
    std::vector<double> counting_E = counting::default_counting_grid;
    int k = 1;
    int l = 2;
    int levels = 2;
    double contour_Q = 8.0;
    double left_anchor = -1.0;
    std::vector<int> orders = {2, 4, 6};
    std::vector<std::string> families = {"single", "uniform", "random-unit"};
    long samples = 20000;
    long dense_cap = 512;
    std::string out = "results";
    int workers = 1;

    // Throws ConfigError.
    void validate() const;

    bool operator==(const ExperimentConfig&) const = default;
};

// Sectioned key = value text; '#' starts a comment line. Errors carry the line number.
//   [experiment]   kind, n, replicas, seed, out, workers, dense_cap
//   [distribution] kind, tail_index, D
//   [grid]         E, eta  (or spec = "E=...;eta=...")
//   [domain]       c, M
//   [calibration]  any name = value
//   [thresholds]   K
//   [counting]     E
//   [indices]      k, l, levels
//   [contour]      Q, left_anchor
//   [inequalities] orders, families, samples
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(std::string_view json);

}  // namespace mplab::experiment
