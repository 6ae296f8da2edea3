#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "mplab/ensemble.hpp"
#include "mplab/rng.hpp"
#include "oracles.hpp"

using namespace mplab;
using ensemble::EntryDistribution;
using ensemble::Kind;

namespace {

EntryDistribution dist_of(Kind kind, double D = 1.0) {
    EntryDistribution d;
    d.kind = kind;
    d.D = D;
    return d;
}

// E min(|Y|, b)^k by quadrature against the component density.
double clipped_moment_by_quadrature(const EntryDistribution& d, int k, double b) {
    if (d.kind == Kind::gaussian) {
        auto f = [&](double y) {
            return std::pow(y, k) * 2.0 * std::exp(-0.5 * y * y) / std::sqrt(2.0 * std::numbers::pi);
        };
        auto tail = [&](double y) { return 2.0 * std::exp(-0.5 * y * y) / std::sqrt(2.0 * std::numbers::pi); };
        return oracle::integrate(f, 0.0, b) + std::pow(b, k) * oracle::integrate(tail, b, 40.0);
    }
    // |Y| has survival (1 + t)^(-alpha).
    double a = d.tail_index;
    auto f = [&](double t) { return std::pow(t, k) * a * std::pow(1.0 + t, -a - 1.0); };
    return oracle::integrate(f, 0.0, b) + std::pow(b, k) * std::pow(1.0 + b, -a);
}

}  // namespace

TEST(Sample, Deterministic) {
    for (Kind kind : {Kind::gaussian, Kind::rademacher, Kind::heavy_tail}) {
        auto a = ensemble::sample_matrix(16, dist_of(kind), 99);
        auto b = ensemble::sample_matrix(16, dist_of(kind), 99);
        EXPECT_TRUE(a.X == b.X);
        auto c = ensemble::sample_matrix(16, dist_of(kind), 100);
        EXPECT_FALSE(a.X == c.X);
    }
}

TEST(Sample, TruncationBound) {
    for (Kind kind : {Kind::gaussian, Kind::heavy_tail}) {
        for (long N : {4L, 16L, 64L}) {
            for (double D : {0.9, 1.0, 2.0}) {
                auto s = ensemble::sample_matrix(N, dist_of(kind, D), 7);
                double bound = D * std::pow(static_cast<double>(N), 0.25);
                EXPECT_LE(s.X.cwiseAbs().maxCoeff(), bound) << N << " " << D;
            }
        }
    }
    auto r = ensemble::sample_matrix(8, dist_of(Kind::rademacher), 3);
    for (long i = 0; i < 8; ++i)
        for (long j = 0; j < 8; ++j) EXPECT_NEAR(std::abs(r.X(i, j)), 1.0, 1e-15);
}

TEST(Sample, PooledMomentsGaussian) {
    // 2 * 512^2 components per matrix, four matrices give about 2e6 pooled values.
    const long N = 512;
    double n = 0, s1 = 0, s2 = 0, s4 = 0;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        auto m = ensemble::sample_matrix(N, dist_of(Kind::gaussian), seed);
        for (long i = 0; i < N; ++i)
            for (long j = 0; j < N; ++j)
                for (double v : {m.X(i, j).real(), m.X(i, j).imag()}) {
                    n += 1;
                    s1 += v;
                    s2 += v * v;
                    s4 += v * v * v * v;
                }
    }
    double mean = s1 / n;
    double var = s2 / n;
    double se_mean = std::sqrt(var / n);
    double se_var = std::sqrt((s4 / n - var * var) / n);
    EXPECT_LE(std::abs(mean), 4 * se_mean);
    EXPECT_LE(std::abs(var - 0.5), 4 * se_var);
}

TEST(Sample, Errors) {
    EXPECT_THROW(ensemble::sample_matrix(1, dist_of(Kind::gaussian), 1), std::invalid_argument);
    auto bad = dist_of(Kind::heavy_tail);
    bad.tail_index = 3.0;
    EXPECT_THROW(ensemble::sample_matrix(8, bad, 1), std::invalid_argument);
    EXPECT_THROW(ensemble::sample_matrix(8, dist_of(Kind::gaussian, -1.0), 1),
                 std::invalid_argument);
    // D N^(1/4) below one leaves no room for variance 1/2 components.
    EXPECT_THROW(ensemble::sample_matrix(2, dist_of(Kind::gaussian, 0.5), 1),
                 std::invalid_argument);
    EXPECT_THROW(ensemble::parse_kind("cauchy"), std::invalid_argument);
}

TEST(Standardization, RestoresVariance) {
    for (Kind kind : {Kind::gaussian, Kind::heavy_tail}) {
        for (long N : {4L, 64L, 1024L}) {
            auto d = dist_of(kind);
            auto s = ensemble::standardization(d, N);
            double oracle_var = clipped_moment_by_quadrature(d, 2, s.clip);
            EXPECT_NEAR(s.clipped_variance, oracle_var, 1e-10 * oracle_var);
            EXPECT_NEAR(s.scale * s.scale * s.clipped_variance, 0.5, 1e-12);
            EXPECT_LE(s.clip * s.scale * std::numbers::sqrt2, std::pow(double(N), 0.25));
        }
    }
}

TEST(Standardization, ClippedMomentMatchesQuadrature) {
    for (Kind kind : {Kind::gaussian, Kind::heavy_tail}) {
        for (double b : {0.3, 1.0, 2.5, 7.0}) {
            auto d = dist_of(kind);
            for (int k : {2, 4}) {
                double q = clipped_moment_by_quadrature(d, k, b);
                EXPECT_NEAR(ensemble::clipped_moment(d, k, b), q, 1e-9 * std::max(1.0, q))
                    << ensemble::to_string(kind) << " b=" << b << " k=" << k;
            }
        }
    }
    auto inf = std::numeric_limits<double>::infinity();
    EXPECT_NEAR(ensemble::clipped_moment(dist_of(Kind::gaussian), 2, inf), 1.0, 1e-14);
    EXPECT_NEAR(ensemble::clipped_moment(dist_of(Kind::gaussian), 4, inf), 3.0, 1e-13);
    EXPECT_THROW(ensemble::clipped_moment(dist_of(Kind::gaussian), 3, 1.0), std::invalid_argument);
}

TEST(MomentReport, Gaussian) {
    auto r = ensemble::moment_report(dist_of(Kind::gaussian), 200000, 5);
    EXPECT_FALSE(r.violation);
    EXPECT_LE(std::abs(r.m2 - 1.0), 5 * r.m2_stderr);
    // Truncation at 1024^(1/4) barely moves the fourth moment of a complex Gaussian.
    EXPECT_NEAR(r.mu4_exact, 2.0, 1e-3);
    EXPECT_LE(std::abs(r.m4 - r.mu4_exact), 5 * r.m4_stderr);
}

TEST(MomentReport, Rademacher) {
    auto r = ensemble::moment_report(dist_of(Kind::rademacher), 10000, 5);
    EXPECT_NEAR(r.m4, 1.0, 1e-14);
    EXPECT_NEAR(r.m2, 1.0, 1e-14);
    EXPECT_FALSE(r.violation);
}

TEST(MomentReport, HeavyTail) {
    auto r = ensemble::moment_report(dist_of(Kind::heavy_tail), 400000, 11);
    EXPECT_FALSE(r.violation);
    EXPECT_GT(r.mu4_exact, 2.0);
    EXPECT_LE(std::abs(r.m4 - r.mu4_exact), 5 * r.m4_stderr);
    EXPECT_THROW(ensemble::moment_report(dist_of(Kind::gaussian), 9999, 1), std::invalid_argument);
}

TEST(Binary, RoundTrip) {
    auto s = ensemble::sample_matrix(6, dist_of(Kind::heavy_tail, 1.5), 0xABCDEF);
    std::stringstream buf;
    ensemble::write_binary(s, buf);
    EXPECT_EQ(buf.str().size(), 4 + 4 + 8 + 1 + 8 + 8 + 8 + 1 + 36 * 16u);
    EXPECT_EQ(buf.str().substr(0, 4), "MPLX");
    auto back = ensemble::read_binary(buf);
    EXPECT_EQ(back.N, 6);
    EXPECT_EQ(back.seed, s.seed);
    EXPECT_EQ(back.dist, s.dist);
    EXPECT_TRUE(back.X == s.X);

    std::stringstream junk("XXXX");
    EXPECT_THROW(ensemble::read_binary(junk), std::exception);
}

TEST(Seeds, ReplicaStreamsDistinct) {
    std::set<std::uint64_t> seen;
    for (long N : {8L, 16L, 32L})
        for (long r = 0; r < 1000; ++r) seen.insert(rng::replica_seed(42, N, r));
    EXPECT_EQ(seen.size(), 3000u);
    EXPECT_EQ(rng::replica_seed(42, 8, 3), rng::derive_seed(rng::derive_seed(42, 8), 3));
    // Documented rule: mix64(master ^ mix64(index + golden_gamma)).
    EXPECT_EQ(rng::derive_seed(0, 0), rng::mix64(0 ^ rng::mix64(rng::golden_gamma)));
}

TEST(Rng, UniformOpenInterval) {
    EXPECT_GT(rng::SplitMix64::to_unit(0), 0.0);
    EXPECT_LT(rng::SplitMix64::to_unit(~0ULL), 1.0);
    rng::SplitMix64 g(1);
    double s = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) s += g.uniform();
    EXPECT_NEAR(s / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
}
