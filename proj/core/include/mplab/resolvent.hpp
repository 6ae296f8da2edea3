#pragma once

#include <vector>

#include "mplab/ensemble.hpp"
#include "mplab/spectrum.hpp"
#include "mplab/types.hpp"

namespace mplab::resolvent {

struct ResolventOptions {
    long dense_cap = 512;
    bool verify = true;        // check max|(A - theta) R - I|
    double tolerance = 1e-9;
};

// G = (Y^* Y - theta)^{-1}, curlyG = (Y Y^* - theta)^{-1} with Y = X_N minus
// columns J1 and rows J2. Entries are addressed by original 1-based labels.
struct ResolventPair {
    SpectralPoint theta;
    IndexSets sets;
    long N = 0;
    CMatrix G;
    CMatrix curlyG;
    std::vector<int> col_labels;
    std::vector<int> row_labels;

    long col_pos(int label) const;
    long row_pos(int label) const;
    cplx G_at(int i, int j) const { return G(col_pos(i), col_pos(j)); }
    cplx curlyG_at(int i, int j) const { return curlyG(row_pos(i), row_pos(j)); }

    // (1/N) Tr G
    cplx DeltaN() const { return G.trace() / static_cast<double>(N); }
};

// X_N with columns J1 and rows J2 removed.
CMatrix minor_matrix(const CMatrix& XN, const IndexSets& sets);

ResolventPair build_resolvents(const ensemble::MatrixSample& X, const SpectralPoint& theta,
                               const IndexSets& sets = {}, const ResolventOptions& opts = {});

// Same, from an already scaled X_N.
ResolventPair build_resolvents_scaled(const CMatrix& XN, const SpectralPoint& theta,
                                      const IndexSets& sets = {}, const ResolventOptions& opts = {});

}  // namespace mplab::resolvent
