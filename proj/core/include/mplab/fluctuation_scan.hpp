#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mplab/calibration.hpp"
#include "mplab/ensemble.hpp"
#include "mplab/local_law.hpp"

namespace mplab::locallaw {

struct ScanOptions {
    std::vector<double> K = {1.0, 2.0, 5.0, 10.0};  // tail thresholds for N eta |Lambda|
    double bR_C = calibration::bR_C;
    DomainParams domain;
    long dense_cap = 512;
    bool monitored = true;  // resolvent columns, only when N <= dense_cap
    int resamples = 8;      // fresh first columns for E_1 W_1
    int workers = 1;
};

// Resolvent-based quantities at k = 1, l = 2 for one replica and one grid point.
struct Monitored {
    double abs_G11 = 0.0;             // |sqrt(theta) G_11|
    double inv_abs_G11 = 0.0;         // 1 / |sqrt(theta) G_11|
    double centered_reciprocal = 0.0; // |(I - E_1) 1/(sqrt(theta) G_11)| = |sqrt(theta) Upsilon_1|
    double abs_G12 = 0.0;             // |sqrt(theta) G_12|
    double abs_W = 0.0;               // |W_1|, W_1 = sqrt(theta) Upsilon_1 sqrt(theta) G_11
    double abs_EW = 0.0;              // |E_1 W_1| over fresh first columns
    double abs_centered_W = 0.0;      // |(I - E_1) W_1|
    double abs_mean_W = 0.0;          // |N^-1 sum_k W_k|
    double lambda_composite = 0.0;
    double bR_bound = 0.0;
    double quad_residual = 0.0;
};

struct ReplicaFluctuation {
    std::vector<cplx> Lambda;           // per grid point
    std::vector<Monitored> monitored;   // per grid point, empty when not computed
};

ReplicaFluctuation fluctuation_replica(const ensemble::MatrixSample& X,
                                       const std::vector<SpectralPoint>& grid,
                                       const ScanOptions& opts = {});

struct ScanStat {
    SpectralPoint theta;
    long N = 0;
    std::string dist;
    long replicas = 0;
    std::string stat_name;
    double value = 0.0;
    double stderr_value = std::numeric_limits<double>::quiet_NaN();
};

std::vector<ScanStat> summarize_scan(const std::vector<SpectralPoint>& grid, long N,
                                     const std::string& dist,
                                     const std::vector<ReplicaFluctuation>& replicas,
                                     const ScanOptions& opts = {});

// Replica r uses the matrix seeded by derive_seed(derive_seed(master_seed, N), r).
std::vector<ScanStat> fluctuation_scan(long N, const ensemble::EntryDistribution& dist,
                                       std::uint64_t master_seed, long replicas,
                                       const std::vector<SpectralPoint>& grid,
                                       const ScanOptions& opts = {});

}  // namespace mplab::locallaw
