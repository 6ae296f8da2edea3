#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mplab/ensemble.hpp"

namespace mplab::moments {

// Q = sum_{j != k} a_jk x_j conj(x_k) = sum_j xi_j + sum_j xihat_j with
//   xi_j    = x_j       sum_{k<j} a_jk conj(x_k)
//   xihat_j = conj(x_j) sum_{k<j} a_kj x_k
struct Decomposition {
    cplx Q;
    std::vector<cplx> xi;
    std::vector<cplx> xihat;
    std::vector<cplx> S;     // sum_{k<j} a_jk conj(x_k)
    std::vector<cplx> Shat;  // sum_{k<j} a_kj x_k
};

Decomposition decompose(const CMatrix& a, const CVector& x);

struct MartingaleReport {
    std::size_t samples = 0;
    double max_identity_residual = 0.0;  // |Q - sum xi - sum xihat| / max(1, |Q|)
    double max_mean_z = 0.0;             // E xi_j, E xihat_j against 0, in standard errors
    double max_orthogonality_z = 0.0;    // E xi_j conj(xi_i), i < j, in standard errors
    double max_conditional_z = 0.0;      // E[|xi_j|^2 | prefix] - |S_j|^2 with x_j resampled

    bool within(double z = 5.0) const {
        return max_mean_z <= z && max_orthogonality_z <= z && max_conditional_z <= z;
    }
};

// Entries are truncated as for an N = max(a.rows(), 2) matrix.
MartingaleReport martingale_decomposition_check(const CMatrix& a,
                                                const ensemble::EntryDistribution& dist,
                                                std::size_t n_samples, std::uint64_t seed,
                                                int resamples = 4);

enum class Inequality { rosenthal, burkholder };
enum class Family { single, uniform, random_unit, resolvent };

std::string to_string(Inequality kind);
std::string to_string(Family family);
Family parse_family(const std::string& text);

// Unit-norm coefficient vectors and unit-Frobenius zero-diagonal matrices. The
// resolvent family is curlyG / sqrt(N) at theta = 2 + i for a Gaussian sample,
// diagonal removed (matrix only).
CVector coefficient_vector(Family family, long N, std::uint64_t seed);
CMatrix coefficient_matrix(Family family, long N, std::uint64_t seed);

struct RatioRow {
    Inequality inequality = Inequality::rosenthal;
    int p = 2;
    long N = 0;
    Family family = Family::single;
    std::string dist;
    double ratio = 0.0;   // LHS / stripped RHS
    double stderr_value = 0.0;
    double lhs = 0.0;     // empirical E|.|^p
    double lhs_stderr = 0.0;
    double rhs = 0.0;
    double mu_p = 0.0;    // empirical E|x|^p of the same sample
};

struct RatioScanSpec {
    std::vector<int> orders = {2, 4, 6};
    std::vector<long> N = {64, 256};
    std::vector<Family> families = {Family::single, Family::uniform, Family::random_unit};
    std::vector<Inequality> inequalities = {Inequality::rosenthal, Inequality::burkholder};
    std::size_t samples = 20000;
    std::uint64_t seed = 1;
    ensemble::EntryDistribution dist;
    int workers = 1;
};

// Rosenthal: E|sum a_j x_j|^p / (p^p ((sum |a_j|^2)^{p/2} + mu_p sum |a_j|^p)).
// Burkholder: E|Q|^p / (p^p (E (sum|S_j|^2)^{p/2} + mu_p E sum|S_j|^p) + same with Shat).
// Rows ordered by inequality, N, family, p.
std::vector<RatioRow> inequality_ratio_scan(const RatioScanSpec& spec);

}  // namespace mplab::moments
