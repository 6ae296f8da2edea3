#include <cmath>

#include <gtest/gtest.h>

#include "mplab/moments.hpp"
#include "mplab/rng.hpp"

using namespace mplab;
using moments::Family;
using moments::Inequality;

namespace {

const moments::RatioRow& find_row(const std::vector<moments::RatioRow>& rows, Inequality ineq,
                                  long N, Family fam, int p) {
    for (const auto& r : rows)
        if (r.inequality == ineq && r.N == N && r.family == fam && r.p == p) return r;
    throw std::runtime_error("row not found");
}

}  // namespace

TEST(Decompose, ZeroCoefficients) {
    CVector x = CVector::Random(5);
    auto d = moments::decompose(CMatrix::Zero(5, 5), x);
    EXPECT_EQ(d.Q, cplx(0.0));
    for (auto v : d.xi) EXPECT_EQ(v, cplx(0.0));
    for (auto v : d.xihat) EXPECT_EQ(v, cplx(0.0));
}

TEST(Decompose, MatchesBilinearForm) {
    const long n = 7;
    CMatrix a = CMatrix::Random(n, n);
    a.diagonal().setZero();
    CVector x = CVector::Random(n);
    cplx Q = 0.0;
    for (long j = 0; j < n; ++j)
        for (long k = 0; k < n; ++k)
            if (j != k) Q += a(j, k) * x(j) * std::conj(x(k));
    auto d = moments::decompose(a, x);
    EXPECT_LE(std::abs(d.Q - Q), 1e-13);
    cplx sum = 0.0;
    for (long j = 0; j < n; ++j) sum += d.xi[j] + d.xihat[j];
    EXPECT_LE(std::abs(sum - Q), 1e-13);
    EXPECT_LE(std::abs(d.xi[3] - x(3) * d.S[3]), 1e-15);
    EXPECT_LE(std::abs(d.xihat[3] - std::conj(x(3)) * d.Shat[3]), 1e-15);
}

TEST(Martingale, SingleCoefficient) {
    CMatrix a = CMatrix::Zero(3, 3);
    a(1, 0) = 1.0;
    auto rep = moments::martingale_decomposition_check(a, {}, 20000, 3);
    EXPECT_EQ(rep.samples, 20000u);
    EXPECT_LE(rep.max_identity_residual, 1e-14);
    EXPECT_TRUE(rep.within(5.0));
}

TEST(Martingale, ResolventCoefficients) {
    for (auto kind : {ensemble::Kind::gaussian, ensemble::Kind::rademacher}) {
        ensemble::EntryDistribution d;
        d.kind = kind;
        auto a = moments::coefficient_matrix(Family::resolvent, 8, 4);
        auto rep = moments::martingale_decomposition_check(a, d, 20000, 5);
        EXPECT_LE(rep.max_identity_residual, 1e-13);
        EXPECT_TRUE(rep.within(5.0)) << rep.max_mean_z << " " << rep.max_orthogonality_z << " "
                                     << rep.max_conditional_z;
    }
}

TEST(Martingale, Errors) {
    CMatrix a = CMatrix::Zero(3, 3);
    a(1, 1) = 0.5;
    EXPECT_THROW(moments::martingale_decomposition_check(a, {}, 20000, 1), std::invalid_argument);
    EXPECT_THROW(moments::martingale_decomposition_check(CMatrix::Zero(3, 3), {}, 9999, 1),
                 std::invalid_argument);
}

TEST(Coefficients, Normalization) {
    for (Family f : {Family::single, Family::uniform, Family::random_unit, Family::resolvent}) {
        if (f != Family::resolvent) {
            auto v = moments::coefficient_vector(f, 16, 2);
            EXPECT_NEAR(v.norm(), 1.0, 1e-14) << moments::to_string(f);
        }
        auto m = moments::coefficient_matrix(f, 16, 2);
        EXPECT_NEAR(m.norm(), 1.0, 1e-14) << moments::to_string(f);
        EXPECT_EQ(m.diagonal().cwiseAbs().maxCoeff(), 0.0);
        EXPECT_EQ(moments::parse_family(moments::to_string(f)), f);
    }
    EXPECT_EQ(moments::to_string(Family::random_unit), "random-unit");
    EXPECT_THROW(moments::parse_family("banded"), std::invalid_argument);
    EXPECT_THROW(moments::coefficient_vector(Family::resolvent, 16, 2), std::invalid_argument);
}

TEST(RatioScan, GaussianClosedForms) {
    moments::RatioScanSpec spec;
    spec.orders = {2, 4, 6};
    spec.N = {32};
    spec.families = {Family::single, Family::uniform};
    spec.samples = 100000;
    spec.seed = 7;
    auto rows = moments::inequality_ratio_scan(spec);
    const double mu4 = ensemble::standardization(spec.dist, 32).mu4;

    // Single coordinate: E|x_1|^4 = mu4 (below 2 once truncated at 32^(1/4)).
    const auto& s4 = find_row(rows, Inequality::rosenthal, 32, Family::single, 4);
    EXPECT_LE(std::abs(s4.lhs - mu4), 5 * s4.lhs_stderr);

    // Uniform 1/sqrt(N): E|S|^2 = 1 and E|S|^4 = sum|a|^4 (mu4 - 2) + 2 (sum|a|^2)^2.
    const auto& u2 = find_row(rows, Inequality::rosenthal, 32, Family::uniform, 2);
    EXPECT_LE(std::abs(u2.lhs - 1.0), 5 * u2.lhs_stderr);
    const auto& u4 = find_row(rows, Inequality::rosenthal, 32, Family::uniform, 4);
    EXPECT_LE(std::abs(u4.lhs - ((mu4 - 2.0) / 32.0 + 2.0)), 5 * u4.lhs_stderr);
    // Close to a standard complex Gaussian: E|Z|^6 = 3! = 6, up to O(1/N) cumulant terms.
    const auto& u6 = find_row(rows, Inequality::rosenthal, 32, Family::uniform, 6);
    EXPECT_NEAR(u6.lhs, 6.0, 5 * u6.lhs_stderr + 0.2);

    // Burkholder, unit Frobenius zero-diagonal a: E|Q|^2 = sum |a_jk|^2 = 1 since E x^2 = 0.
    for (Family f : spec.families) {
        const auto& b2 = find_row(rows, Inequality::burkholder, 32, f, 2);
        EXPECT_LE(std::abs(b2.lhs - 1.0), 5 * b2.lhs_stderr) << moments::to_string(f);
    }
    for (const auto& r : rows) {
        EXPECT_TRUE(std::isfinite(r.ratio));
        EXPECT_GT(r.ratio, 0.0);
    }
}

TEST(RatioScan, ResolventBurkholderStableInN) {
    moments::RatioScanSpec spec;
    spec.orders = {4};
    spec.N = {32, 64};
    spec.families = {Family::resolvent};
    spec.inequalities = {Inequality::burkholder};
    spec.samples = 10000;
    auto rows = moments::inequality_ratio_scan(spec);
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& r : rows) EXPECT_TRUE(std::isfinite(r.ratio));
    double q = rows[1].ratio / rows[0].ratio;
    EXPECT_LT(q, 2.0);
    EXPECT_GT(q, 0.5);
}

TEST(RatioScan, WorkerInvariantAndErrors) {
    moments::RatioScanSpec spec;
    spec.orders = {2, 4};
    spec.N = {16};
    spec.samples = 10000;
    auto a = moments::inequality_ratio_scan(spec);
    spec.workers = 3;
    auto b = moments::inequality_ratio_scan(spec);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].ratio, b[i].ratio);

    spec.orders = {3};
    EXPECT_THROW(moments::inequality_ratio_scan(spec), std::invalid_argument);
    spec.orders = {10};
    EXPECT_THROW(moments::inequality_ratio_scan(spec), std::invalid_argument);
}
