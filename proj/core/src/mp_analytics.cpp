#include "mplab/mp_analytics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mplab::mp {

namespace {

constexpr double pi = std::numbers::pi;

// n_MP in the angle variable E = 4 sin^2(phi).
double cdf_angle(double phi) { return (2.0 * phi + std::sin(2.0 * phi)) / pi; }

double cdf_angle_derivative(double phi) {
    double c = std::cos(phi);
    return 4.0 / pi * c * c;
}

}  // namespace

MPModel MPModel::with_ratio(double d) {
    if (!(d > 0.0) || !std::isfinite(d)) {
        throw std::invalid_argument("aspect ratio must be positive and finite");
    }
    double r = std::sqrt(d);
    return {d, (1.0 - r) * (1.0 - r), (1.0 + r) * (1.0 + r)};
}

double MPModel::density(double E) const { return mp::density(E, d); }

double density(double E, double d) {
    if (!std::isfinite(E)) {
        throw std::domain_error("density: non-finite energy");
    }
    MPModel m = MPModel::with_ratio(d);
    if (E <= 0.0 || E < m.lambda_minus || E > m.lambda_plus) {
        return 0.0;
    }
    double v = (m.lambda_plus - E) * (E - m.lambda_minus) / (E * E);
    return v > 0.0 ? std::sqrt(v) / (2.0 * pi) : 0.0;
}

cplx stieltjes(cplx theta) {
    double E = theta.real();
    double eta = theta.imag();
    if (!std::isfinite(E) || !std::isfinite(eta)) {
        throw std::domain_error("stieltjes: non-finite spectral parameter");
    }
    if (eta == 0.0 && E >= 0.0 && E <= 4.0) {
        throw std::domain_error("stieltjes: real parameter on the support [0, 4]");
    }

    // Roots of x^2 + x + 1/theta; |big| >= 1/2 so the product form for small is stable.
    cplx inv = 1.0 / theta;
    cplx s = std::sqrt(1.0 - 4.0 * inv);
    cplx big = (-1.0 - s) / 2.0;
    cplx small = inv / big;

    cplx root;
    if (eta > 0.0) {
        root = big.imag() > small.imag() ? big : small;
    } else if (eta < 0.0) {
        root = big.imag() < small.imag() ? big : small;
    } else {
        root = std::abs(small) <= std::abs(big) ? small : big;
        root = {root.real(), 0.0};
    }

    for (int it = 0; it < 2; ++it) {
        cplx f = root * root + root + inv;
        cplx fp = 2.0 * root + 1.0;
        if (std::abs(fp) < 1e-8) {
            break;
        }
        cplx next = root - f / fp;
        if (eta == 0.0) {
            next = {next.real(), 0.0};
        }
        cplx fn = next * next + next + inv;
        if (std::abs(fn) >= std::abs(f)) {
            break;
        }
        root = next;
    }
    return root;
}

double cdf(double E) {
    if (std::isnan(E)) {
        throw std::domain_error("cdf: NaN energy");
    }
    if (E <= 0.0) {
        return 0.0;
    }
    if (E >= 4.0) {
        return 1.0;
    }
    return cdf_angle(std::asin(std::sqrt(E) / 2.0));
}

double classical_location(long a, long N) {
    if (N < 1 || a < 1 || a > N) {
        throw std::invalid_argument("classical_location: need 1 <= a <= N");
    }
    if (a == N) {
        return 4.0;
    }
    double t = static_cast<double>(a) / static_cast<double>(N);

    // cdf_angle(phi) <= 4 phi / pi, so the small-E asymptote is a lower bracket.
    double lo = pi * t / 4.0;
    double hi = pi / 2.0;
    while (hi - lo > 1e-6) {
        double mid = 0.5 * (lo + hi);
        (cdf_angle(mid) < t ? lo : hi) = mid;
    }

    double phi = 0.5 * (lo + hi);
    for (int it = 0; it < 60; ++it) {
        double f = cdf_angle(phi) - t;
        if (std::abs(f) <= 1e-15) {
            break;
        }
        double fp = cdf_angle_derivative(phi);
        double next = phi - f / fp;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        (cdf_angle(next) < t ? lo : hi) = next;
        if (next == phi) {
            break;
        }
        phi = next;
    }
    double sp = std::sin(phi);
    return 4.0 * sp * sp;
}

bool in_domain_S(double E, double eta, const DomainParams& params) {
    return 4.0 * eta > params.c * (E * E + eta * eta - 4.0 * E);
}

EdgeRatios edge_bound_ratios(std::span<const SpectralPoint> grid) {
    if (grid.empty()) {
        throw std::invalid_argument("edge_bound_ratios: empty grid");
    }
    EdgeRatios out;
    out.min_edge_gap = std::numeric_limits<double>::infinity();
    out.min_im = std::numeric_limits<double>::infinity();
    out.max_im = 0.0;
    for (const auto& p : grid) {
        double kappa = p.kappa();
        if (!(p.eta > 0.0) || !(p.E > 0.0) || kappa < p.eta) {
            throw std::invalid_argument("edge_bound_ratios: need eta > 0, E > 0, kappa >= eta");
        }
        cplx delta = stieltjes(p);
        double gap = std::abs(delta + 0.5) / std::pow(kappa * kappa + p.eta * p.eta, 0.25);
        double im = delta.imag() * std::sqrt(kappa + p.eta) / p.eta;
        out.min_edge_gap = std::min(out.min_edge_gap, gap);
        out.min_im = std::min(out.min_im, im);
        out.max_im = std::max(out.max_im, im);
        ++out.points;
    }
    return out;
}

}  // namespace mplab::mp
