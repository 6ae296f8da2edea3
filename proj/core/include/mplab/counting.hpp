#pragma once

#include <span>
#include <string>
#include <vector>

#include "mplab/types.hpp"

namespace mplab::counting {

// n_N(E) = #{alpha : s_alpha <= E} / N over ascending eigenvalues.
double counting_function(std::span<const double> eigenvalues, long N, double E);

// min{sqrt(E), log N / N}; E > 4 is normalized as E = 4.
double counting_scale(double E, long N);

inline const std::vector<double> default_counting_grid = {1e-4, 1e-3, 0.01, 0.1, 0.5, 1.0,
                                                          2.0,  3.0,  3.5,  4.0, 4.5};

// One row per (E, stat, quantile); E is NaN for the sup-over-grid rows.
struct CountingRow {
    long N = 0;
    double E = 0.0;
    std::string stat;      // abs_dev | normalized | sup_normalized
    std::string quantile;  // q50 | q90 | q95 | mean | max
    double value = 0.0;
};

struct CountingTable {
    std::vector<CountingRow> rows;
    std::vector<double> sup_normalized;  // per replica, sup over the grid
};

CountingTable counting_deviation(const std::vector<std::vector<double>>& spectra, long N,
                                 const std::vector<double>& E_grid = default_counting_grid);

struct RigidityEntry {
    long a = 0;
    double lambda_a = 0.0;
    double gamma_a = 0.0;
    double stat_bulk = 0.0;  // |lambda_a - gamma_a| N^2 / (a log N)
    double stat_edge = 0.0;  // |lambda_a - gamma_a| N^2 / a^2 when a <= log N, NaN otherwise
    bool hard_edge = false;
};

// gamma_a for a = 1..count.
std::vector<double> classical_locations(long N, long count);

// Indices 1..ceil(N/2); gamma must hold at least that many classical locations.
std::vector<RigidityEntry> rigidity_report(std::span<const double> eigenvalues, long N,
                                           std::span<const double> gamma);

struct RigiditySummary {
    double max_bulk = 0.0;         // max over a <= N/2 of stat_bulk
    double max_edge = 0.0;         // max over a <= log N of stat_edge
    double hard_edge_scaled = 0.0; // N^2 |lambda_1 - gamma_1|
};

RigiditySummary summarize_rigidity(const std::vector<RigidityEntry>& report, long N);

}  // namespace mplab::counting
