#include <cmath>

#include <gtest/gtest.h>

#include "mplab/q_recursion.hpp"

using namespace mplab;

namespace {

ensemble::MatrixSample gaussian(long N, std::uint64_t seed) {
    return ensemble::sample_matrix(N, ensemble::EntryDistribution{}, seed);
}

CMatrix next_level(const CMatrix& a) {
    const long n = a.rows();
    CMatrix b = CMatrix::Zero(n, n);
    for (long r = 0; r < n; ++r)
        for (long l = 0; l < n; ++l)
            for (long j = std::max(r, l) + 1; j < n; ++j) b(r, l) += a(r, j) * std::conj(a(l, j));
    return b;
}

double brute_Q(const CMatrix& a, const CVector& x, bool hat) {
    double q = 0.0;
    for (long j = 0; j < a.rows(); ++j) {
        cplx s = 0.0;
        for (long k = 0; k < j; ++k) s += x(k) * (hat ? a(j, k) : a(k, j));
        q += std::norm(s);
    }
    return q;
}

}  // namespace

TEST(QRecursion, MatchesBruteForce) {
    const long N = 20;
    auto X = gaussian(N, 3);
    SpectralPoint th{1.0, 0.2};
    CMatrix XN = X.XN();
    CMatrix cg = (XN * XN.adjoint() - th.theta() * CMatrix::Identity(N, N)).inverse();
    CVector x = X.raw().col(0);
    auto rep = locallaw::q_recursion(cg, x, N, th.eta, 3);
    ASSERT_EQ(rep.levels.size(), 4u);
    CMatrix a = cg / std::sqrt(double(N));
    for (int nu = 0; nu <= 3; ++nu) {
        const auto& lv = rep.levels[nu];
        EXPECT_EQ(lv.nu, nu);
        EXPECT_LE((lv.a - a).cwiseAbs().maxCoeff(), 1e-13 * std::max(1.0, a.cwiseAbs().maxCoeff()));
        EXPECT_NEAR(lv.Q, brute_Q(a, x, false), 1e-10 * std::max(1.0, lv.Q));
        EXPECT_NEAR(lv.Qhat, brute_Q(a, x, true), 1e-10 * std::max(1.0, lv.Qhat));
        if (lv.has_next) EXPECT_LE(lv.decomposition_residual, 1e-10);
        a = next_level(a);
    }
    EXPECT_LE(rep.max_decomposition_residual(), 1e-10);
}

TEST(QRecursion, DeterministicBoundRandom) {
    auto X = gaussian(64, 8);
    for (int k : {1, 17, 64}) {
        auto rep = locallaw::q_recursion_check(X, {1.0, 0.2}, {}, k, 2);
        EXPECT_GE(rep.min_arr_slack(2), -1e-10);
        EXPECT_GE(rep.min_cs_slack(), -1e-10);
        EXPECT_LE(rep.max_decomposition_residual(), 1e-10);
        EXPECT_GT(rep.holder.rhs, 0.0);
        EXPECT_GE(rep.holder.lhs, 0.0);
    }
    auto rem = locallaw::q_recursion_check(X, {3.0, 0.05}, {{2}, {7}}, 5, 2);
    EXPECT_GE(rem.min_arr_slack(2), -1e-10);
}

TEST(QRecursion, ZeroMatrixClosedForm) {
    const long N = 8;
    auto X = ensemble::MatrixSample::from_matrix(CMatrix::Zero(N, N), false);
    SpectralPoint th{0.5, 0.4};
    auto rep = locallaw::q_recursion_check(X, th, {}, 3, 2);
    cplx z = th.theta();
    CMatrix a0 = -CMatrix::Identity(N, N) / (z * std::sqrt(double(N)));
    EXPECT_LE((rep.levels[0].a - a0).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE(rep.levels[1].a.cwiseAbs().maxCoeff(), 1e-300);
    EXPECT_EQ(rep.levels[0].Q, 0.0);
    // sum_j |a_jr|^2 = 1/(|theta|^2 N) = Im curlyG_rr / (N eta): the bound is tight.
    EXPECT_NEAR(rep.levels[0].arr_min_slack, 0.0, 1e-15);
}

TEST(QRecursion, LevelCap) {
    auto X = gaussian(8, 1);
    EXPECT_THROW(locallaw::q_recursion_check(X, {1, 0.1}, {}, 1, 5), std::invalid_argument);
    EXPECT_THROW(locallaw::q_recursion_check(X, {1, 0.1}, {{1}, {}}, 1, 2), std::invalid_argument);
}
