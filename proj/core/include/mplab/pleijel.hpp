#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mplab/types.hpp"

namespace mplab::counting {

// A Stieltjes transform m(z) = int dmu(s) / (s - z) with exact segment integrals.
class Transform {
public:
    virtual ~Transform() = default;
    virtual cplx operator()(cplx z) const = 0;
    // int_a^b m(z) dz along the straight segment.
    virtual cplx integrate(cplx a, cplx b) const = 0;
};

// Finite sum of atoms w_i / (s_i - z). Segment integrals are evaluated pole by pole as
// Log((s - a) / (s - b)), which is the continuous branch because a straight segment
// turns s - z by less than pi unless it passes through s.
class AtomicTransform final : public Transform {
public:
    AtomicTransform(std::vector<double> atoms, std::vector<double> weights);

    static AtomicTransform from_spectrum(std::span<const double> eigenvalues, long N);
    static AtomicTransform point_mass(double s, double weight = 1.0);

    cplx operator()(cplx z) const override;
    cplx integrate(cplx a, cplx b) const override;

    const std::vector<double>& atoms() const { return atoms_; }

private:
    std::vector<double> atoms_;
    std::vector<double> weights_;
};

// Any evaluator, integrated by 64-point Gauss-Legendre with one refinement pass
// (two 64-point halves). last_error() is |refined - coarse| of the latest call.
class QuadratureTransform final : public Transform {
public:
    explicit QuadratureTransform(std::function<cplx(cplx)> m);

    static QuadratureTransform marchenko_pastur();

    cplx operator()(cplx z) const override { return m_(z); }
    cplx integrate(cplx a, cplx b) const override;
    double last_error() const { return last_error_; }

private:
    std::function<cplx(cplx)> m_;
    mutable double last_error_ = 0.0;
};

// Fixed 64-point Gauss-Legendre rule on [a, b] in the complex plane.
cplx gauss_legendre_64(const std::function<cplx(cplx)>& f, cplx a, cplx b);

struct ContourSpec {
    enum class Kind { L, gamma };

    Kind kind = Kind::L;
    double x = 0.0;        // E for L(z0), left endpoint for gamma
    double x2 = 0.0;       // right endpoint for gamma
    double eta0 = 0.0;
    double left_anchor = -1.0;
    double Q = 8.0;

    void validate() const;
};

struct PleijelResult {
    double estimate = 0.0;    // raw + correction
    double raw = 0.0;         // contour part only
    double correction = 0.0;  // first-order gap terms
    double remainder = 0.0;   // reported size of the neglected term
};

// L(z0) runs E - i eta0 -> E - iQ -> a - iQ -> a + iQ -> E + iQ -> E + i eta0 (a = left
// anchor); the estimate of mu(-inf, E] is (1/2 pi i) int_L m dz - (eta0/pi) Re m(z0),
// z0 = E + i eta0, with remainder eta0 Im m(z0). Only the upper half is integrated;
// the lower half is its conjugate.
PleijelResult pleijel_count(const Transform& m, const ContourSpec& contour);
PleijelResult pleijel_count(const Transform& m, double E, double eta0, double left_anchor = -1.0,
                            double Q = 8.0);

// (1/2 pi i) over all five legs of L(z0), without the gap correction.
cplx full_contour_integral(const Transform& m, const ContourSpec& contour);

// gamma(x, x') runs x + i eta0 -> x + iQ -> x' + iQ -> x' + i eta0; the estimate of
// mu[x, x'] is Im(int_gamma m dz)/pi + (eta0/pi)(Re m(x + i eta0) - Re m(x' + i eta0)),
// remainder eta0 (|m(x + i eta0)| + |m(x' + i eta0)|).
PleijelResult pleijel_interval(const Transform& m, double x, double x2, double eta0,
                               double Q = 8.0);

}  // namespace mplab::counting
