#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "mplab/grid.hpp"
#include "mplab/mp_analytics.hpp"
#include "mplab/pleijel.hpp"
#include "mplab/spectrum.hpp"
#include "oracles.hpp"

using namespace mplab;
using counting::AtomicTransform;
using counting::ContourSpec;
using counting::QuadratureTransform;

namespace {

double direct_count(const std::vector<double>& s, long N, double E) {
    return double(std::upper_bound(s.begin(), s.end(), E) - s.begin()) / double(N);
}

// int_a^b m(z) dz along the segment, real and imaginary parts by tanh-sinh.
cplx segment_by_quadrature(const counting::Transform& m, cplx a, cplx b) {
    auto at = [&](double t) { return m(a + t * (b - a)) * (b - a); };
    return {oracle::integrate([&](double t) { return at(t).real(); }, 0.0, 1.0),
            oracle::integrate([&](double t) { return at(t).imag(); }, 0.0, 1.0)};
}

std::vector<double> gaussian_spectrum(long N, std::uint64_t seed) {
    return resolvent::compute_spectrum(
               ensemble::sample_matrix(N, ensemble::EntryDistribution{}, seed))
        .eigenvalues;
}

}  // namespace

TEST(PleijelCount, PointMassExamples) {
    auto at0 = AtomicTransform::point_mass(0.0);
    EXPECT_NEAR(counting::pleijel_count(at0, 1.0, 1e-4).estimate, 1.0, 1e-3);
    auto at5 = AtomicTransform::point_mass(5.0);
    EXPECT_NEAR(counting::pleijel_count(at5, 1.0, 1e-4).estimate, 0.0, 1e-3);
    // A pole close to E: the first-order correction is what recovers the count.
    auto near = AtomicTransform::point_mass(0.95);
    auto r = counting::pleijel_count(near, 1.0, 0.01);
    EXPECT_NEAR(r.estimate, 1.0, 1e-2);
    EXPECT_LT(std::abs(r.estimate - 1.0), std::abs(r.raw - 1.0));
}

TEST(PleijelCount, EmpiricalMatchesDirectCount) {
    const long N = 128;
    const double E = 2.0;
    double eta0 = pleijel_eta0(E, N, 1.0);
    int good = 0;
    const int replicas = 50;
    for (int r = 0; r < replicas; ++r) {
        auto s = gaussian_spectrum(N, rng::replica_seed(1, N, r));
        auto m = AtomicTransform::from_spectrum(s, N);
        double est = counting::pleijel_count(m, E, eta0).estimate;
        if (std::abs(est - direct_count(s, N, E)) <= 0.5 / N) ++good;
    }
    EXPECT_GE(good, 45);
}

TEST(PleijelCount, ConjugateShortcutMatchesFullContour) {
    auto s = gaussian_spectrum(32, 4);
    auto m = AtomicTransform::from_spectrum(s, 32);
    for (double E : {0.5, 2.0, 3.7}) {
        ContourSpec c{ContourSpec::Kind::L, E, 0.0, 0.02};
        auto half = counting::pleijel_count(m, c);
        cplx full = counting::full_contour_integral(m, c);
        EXPECT_NEAR(half.raw, full.real(), 1e-10);
        EXPECT_NEAR(full.imag(), 0.0, 1e-10);
    }
    auto mp = QuadratureTransform::marchenko_pastur();
    ContourSpec c{ContourSpec::Kind::L, 2.0, 0.0, 0.05};
    EXPECT_NEAR(counting::pleijel_count(mp, c).raw, counting::full_contour_integral(mp, c).real(),
                1e-10);
}

TEST(PleijelCount, PerPoleMatchesQuadrature) {
    auto s = gaussian_spectrum(16, 9);
    auto m = AtomicTransform::from_spectrum(s, 16);
    const double E = 1.3, eta0 = 0.05, a = -1.0, Q = 8.0;
    cplx legs[][2] = {{{E, eta0}, {E, Q}}, {{E, Q}, {a, Q}}, {{a, Q}, {a, -Q}},
                      {{a, -Q}, {E, -Q}}, {{E, -Q}, {E, -eta0}}, {{0.2, 0.3}, {3.9, 0.01}}};
    for (auto& leg : legs) {
        cplx exact = m.integrate(leg[0], leg[1]);
        cplx quad = segment_by_quadrature(m, leg[0], leg[1]);
        EXPECT_LE(std::abs(exact - quad), 1e-8) << leg[0] << " -> " << leg[1];
    }
}

TEST(PleijelCount, MarchenkoPasturQuadrature) {
    auto mp = QuadratureTransform::marchenko_pastur();
    cplx a(2.0, 0.05), b(2.0, 8.0);
    cplx q = mp.integrate(a, b);
    EXPECT_LE(std::abs(q - segment_by_quadrature(mp, a, b)), 1e-8);
    EXPECT_LE(mp.last_error(), 1e-8);
    for (double E : {1.0, 2.0, 3.0}) {
        double eta0 = 1e-3;
        auto r = counting::pleijel_count(mp, E, eta0);
        EXPECT_NEAR(r.estimate, mp::cdf(E), r.remainder + 1e-6) << E;
    }
}

TEST(PleijelCount, TotalMass) {
    auto s = gaussian_spectrum(64, 2);
    ASSERT_LT(s.back(), 6.0);
    auto m = AtomicTransform::from_spectrum(s, 64);
    auto r = counting::pleijel_count(m, 6.0, 0.05);
    EXPECT_NEAR(r.estimate, 1.0, r.remainder);
    auto mp = QuadratureTransform::marchenko_pastur();
    auto rm = counting::pleijel_count(mp, 5.0, 0.05);
    EXPECT_NEAR(rm.estimate, 1.0, rm.remainder + 1e-8);
}

TEST(PleijelCount, Errors) {
    auto m = AtomicTransform::point_mass(-1.0);
    EXPECT_THROW(counting::pleijel_count(m, 1.0, 0.01), std::domain_error);
    auto ok = AtomicTransform::point_mass(0.5);
    EXPECT_THROW(counting::pleijel_count(ok, 1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(counting::pleijel_count(ok, 1.0, 0.1, -1.0, 0.05), std::invalid_argument);
    EXPECT_THROW(counting::pleijel_count(ok, 1.0, 0.1, 0.5), std::invalid_argument);
    EXPECT_THROW(counting::pleijel_interval(ok, 2.0, 1.0, 0.1), std::invalid_argument);
    // eta0 = 0 puts the gamma endpoints on the real axis.
    EXPECT_THROW(counting::pleijel_interval(AtomicTransform({0.5}, {1.0}), 0.5, 1.0, 0.0),
                 std::invalid_argument);
}

TEST(PleijelInterval, Examples) {
    auto at0 = AtomicTransform::point_mass(0.0);
    EXPECT_NEAR(counting::pleijel_interval(at0, -1.0, 1.0, 1e-4).estimate, 1.0, 1e-3);
    auto mp = QuadratureTransform::marchenko_pastur();
    auto r = counting::pleijel_interval(mp, 5.0, 6.0, 1e-3);
    EXPECT_NEAR(r.estimate, 0.0, 1e-6);
}

TEST(PleijelInterval, SymmetricIntervalNearHardEdge) {
    const long N = 512;
    const double E = 0.01;
    double eta0 = pleijel_eta0(E, N, 1.0);
    int good = 0;
    const int replicas = 20;
    for (int r = 0; r < replicas; ++r) {
        auto s = gaussian_spectrum(N, rng::replica_seed(2, N, r));
        auto m = AtomicTransform::from_spectrum(s, N);
        auto iv = counting::pleijel_interval(m, -E, E, eta0);
        if (std::abs(iv.estimate - direct_count(s, N, E)) <= 0.5 / N) ++good;
        // Nothing lies below -E, so the interval and the half-line count agree.
        auto half = counting::pleijel_count(m, E, eta0);
        EXPECT_NEAR(iv.estimate, half.estimate, iv.remainder + half.remainder);
    }
    EXPECT_GE(good, 18);
}
