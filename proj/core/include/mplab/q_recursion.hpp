#pragma once

#include <vector>

#include "mplab/ensemble.hpp"
#include "mplab/resolvent.hpp"

namespace mplab::locallaw {

// a^(0) = curlyG / sqrt(N); a^(nu+1)_rl = sum_{j > max(r, l)} a_rj conj(a_lj).
// Q_nu = sum_j |sum_{k<j} x_k a_kj|^2, Qhat_nu = sum_j |sum_{k<j} x_k a_jk|^2, and
// Q_nu = Q_nu1 + Q_nu2 + Q_nu3 with the three pieces built from a^(nu+1).
struct QRecursionLevel {
    int nu = 0;
    CMatrix a;
    double Q = 0.0;
    double Qhat = 0.0;
    bool has_next = false;  // pieces below need a^(nu+1)
    cplx Q1;
    cplx Q2;
    cplx Q3;
    double decomposition_residual = 0.0;
    double arr_min_slack = 0.0;  // min_r rhs_r - max{|a^(nu+1)_rr|, sum_j |a^(nu)_jr|^2}
    double cs_min_slack = 0.0;   // min_{r,j} sum_l |a_rl|^2 sum_l |a_jl|^2 - |a^(nu+1)_rj|^2
};

struct HolderChain {
    double lhs = 0.0;       // N^-2 sum_{j >= 2} sum_{r != j} |a^(1)_rj|^2
    double cs_bound = 0.0;  // after the Cauchy-Schwarz step
    double rhs = 0.0;       // N^-1 sum_j |a^(0)_jj|^2
};

struct QRecursionReport {
    std::vector<QRecursionLevel> levels;
    HolderChain holder;

    double max_decomposition_residual() const;
    double min_arr_slack(int max_nu) const;
    double min_cs_slack() const;
};

// Levels nu = 0..L from a given matrix and coefficient vector; eta enters the bound.
QRecursionReport q_recursion(const CMatrix& curlyG, const CVector& x, long N, double eta, int L);

// Uses curlyG^{(J1 u k)}_{(J2)} and the column x^k of sqrt(N) X_N.
QRecursionReport q_recursion_check(const ensemble::MatrixSample& X, const SpectralPoint& theta,
                                   const resolvent::IndexSets& sets, int k, int L,
                                   const resolvent::ResolventOptions& opts = {});

}  // namespace mplab::locallaw
