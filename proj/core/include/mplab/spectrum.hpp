#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mplab/ensemble.hpp"
#include "mplab/types.hpp"

namespace mplab::resolvent {

// Removed column (J1) and row (J2) labels, 1-based, sorted, unique.
struct IndexSets {
    std::vector<int> J1;
    std::vector<int> J2;

    void validate(long N) const;
    IndexSets with_column(int k) const;
    IndexSets with_row(int k) const;
    bool removes_column(int k) const;
    bool removes_row(int k) const;

    bool operator==(const IndexSets&) const = default;
};

// 0-based positions of the labels in 1..N that are not removed.
std::vector<long> kept_positions(const std::vector<int>& removed, long N);

// Space-separated label list, e.g. "1 4".
std::string format_labels(const std::vector<int>& labels);

struct SpectrumSample {
    std::vector<double> eigenvalues;  // ascending, >= 0
    long N = 0;                       // normalization of the counting measure
    std::uint64_t seed = 0;
    std::string dist;
};

// Eigenvalues of (X_N^{(J1)})^* X_N^{(J1)}.
SpectrumSample compute_spectrum(const ensemble::MatrixSample& X, const std::vector<int>& J1 = {});

// Spectra of replicas first..first+count-1, matrix seeds rng::replica_seed(master, N, r).
std::vector<SpectrumSample> replica_spectra(long N, const ensemble::EntryDistribution& dist,
                                            std::uint64_t master, long count, int workers = 1,
                                            long first = 0);

// (1/N) sum 1/(s - theta)
cplx empirical_stieltjes(std::span<const double> eigenvalues, long N, cplx theta);
cplx empirical_stieltjes(const SpectrumSample& spectrum, const SpectralPoint& theta);

}  // namespace mplab::resolvent
