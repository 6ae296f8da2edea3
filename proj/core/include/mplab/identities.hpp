#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "mplab/ensemble.hpp"
#include "mplab/resolvent.hpp"

namespace mplab::resolvent {

inline constexpr double not_applicable = std::numeric_limits<double>::quiet_NaN();

// Equalities carry a residual |a - b| / max(1, |a|, |b|); bounds carry a slack
// (rhs - lhs) that is nonnegative when the bound holds. Unasserted records are
// informational.
struct IdentityRecord {
    std::string identity;
    double residual = not_applicable;
    double slack = not_applicable;
    bool asserted = true;
};

struct IdentityReport {
    std::vector<IdentityRecord> records;

    double max_residual() const;
    double min_slack() const;
    bool holds(double residual_tol = 1e-9, double slack_tol = -1e-10) const;
    const IdentityRecord& find(std::string_view identity) const;
};

// k and l are labels kept both as a column and as a row, k != l.
IdentityReport identity_suite(const ensemble::MatrixSample& X, const SpectralPoint& theta,
                              const IndexSets& sets, int k, int l,
                              const ResolventOptions& opts = {});

struct QuadraticForms {
    cplx upsilon;
    cplx Y;
    cplx Tk;
    cplx curlyTk;
    cplx eps1;
    cplx eps2;
    cplx Kkl;
    cplx curlyKkl;
    double decomposition_residual = 0.0;     // |upsilon - (eps1 + eps2)|
    double K_factorization_residual = 0.0;
    double curlyK_factorization_residual = 0.0;
    double schur_G_residual = 0.0;           // G_kk = -1/(theta(1 + Delta_N + T_k + upsilon))
    double schur_curlyG_residual = 0.0;      // curlyG_kk = -1/(theta(1 + Tr curlyG/N + curlyT_k + Y))
};

QuadraticForms quadratic_forms(const ensemble::MatrixSample& X, const SpectralPoint& theta,
                               const IndexSets& sets, int k, int l,
                               const ResolventOptions& opts = {});

// (x/sqrt N)^* M (x/sqrt N) - Tr M / N
cplx upsilon_form(const CVector& x, const CMatrix& M, long N);

struct EpsilonSplit {
    cplx eps1;  // (1/N) sum_j (|x_j|^2 - 1) M_jj
    cplx eps2;  // (1/N) sum_{j != l} conj(x_j) x_l M_jl
};

EpsilonSplit epsilon_split(const CVector& x, const CMatrix& M, long N);

}  // namespace mplab::resolvent
