#include "mplab/pleijel.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mplab/mp_analytics.hpp"

namespace mplab::counting {

namespace {

constexpr double pi = std::numbers::pi;

struct Rule {
    std::array<double, 64> x{};
    std::array<double, 64> w{};
};

// Nodes by Newton iteration on P_64 from the Chebyshev-like initial guesses.
Rule make_rule() {
    Rule r;
    constexpr int n = 64;
    for (int i = 0; i < n / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    return r;
}

const Rule& rule() {
    static const Rule r = make_rule();
    return r;
}

void check_atom_off_segment(double s, cplx a, cplx b) {
    // s lies on [a, b] only if the segment reaches the real axis at s.
    if ((a.imag() > 0.0) == (b.imag() > 0.0) && a.imag() != 0.0 && b.imag() != 0.0) return;
    if (a.imag() == b.imag()) {
        if (a.imag() == 0.0 && s >= std::min(a.real(), b.real()) && s <= std::max(a.real(), b.real())) {
            throw std::domain_error("pleijel: a pole lies on a contour segment");
        }
        return;
    }
    double t = a.imag() / (a.imag() - b.imag());
    double cross = a.real() + t * (b.real() - a.real());
    if (cross == s) throw std::domain_error("pleijel: a pole lies on a contour segment");
}

}  // namespace

AtomicTransform::AtomicTransform(std::vector<double> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
    if (atoms_.size() != weights_.size()) {
        throw std::invalid_argument("AtomicTransform: atoms and weights differ in length");
    }
}

AtomicTransform AtomicTransform::from_spectrum(std::span<const double> eigenvalues, long N) {
    std::vector<double> a(eigenvalues.begin(), eigenvalues.end());
    std::vector<double> w(a.size(), 1.0 / static_cast<double>(N));
    return {std::move(a), std::move(w)};
}

AtomicTransform AtomicTransform::point_mass(double s, double weight) { return {{s}, {weight}}; }

cplx AtomicTransform::operator()(cplx z) const {
    cplx sum = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) sum += weights_[i] / (atoms_[i] - z);
    return sum;
}

cplx AtomicTransform::integrate(cplx a, cplx b) const {
    cplx sum = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const double s = atoms_[i];
        check_atom_off_segment(s, a, b);
        sum += weights_[i] * std::log((s - a) / (s - b));
    }
    return sum;
}

cplx gauss_legendre_64(const std::function<cplx(cplx)>& f, cplx a, cplx b) {
    const Rule& r = rule();
    const cplx half = 0.5 * (b - a);
    const cplx mid = 0.5 * (a + b);
    cplx sum = 0.0;
    for (int i = 0; i < 64; ++i) sum += r.w[i] * f(mid + half * r.x[i]);
    return sum * half;
}

QuadratureTransform::QuadratureTransform(std::function<cplx(cplx)> m) : m_(std::move(m)) {}

QuadratureTransform QuadratureTransform::marchenko_pastur() {
    return QuadratureTransform([](cplx z) { return mp::stieltjes(z); });
}

cplx QuadratureTransform::integrate(cplx a, cplx b) const {
    cplx coarse = gauss_legendre_64(m_, a, b);
    cplx mid = 0.5 * (a + b);
    cplx fine = gauss_legendre_64(m_, a, mid) + gauss_legendre_64(m_, mid, b);
    last_error_ = std::abs(fine - coarse);
    return fine;
}

void ContourSpec::validate() const {
    if (!(eta0 > 0.0)) throw std::invalid_argument("contour: eta0 must be positive");
    if (!(Q > eta0)) throw std::invalid_argument("contour: Q must exceed eta0");
    if (kind == Kind::L) {
        if (!(left_anchor < 0.0)) throw std::invalid_argument("contour: left anchor must be negative");
        if (!(x > left_anchor)) throw std::invalid_argument("contour: E must exceed the left anchor");
    } else if (!(x < x2)) {
        throw std::invalid_argument("contour: need x < x'");
    }
}

PleijelResult pleijel_count(const Transform& m, const ContourSpec& c) {
    if (c.kind != ContourSpec::Kind::L) return pleijel_interval(m, c.x, c.x2, c.eta0, c.Q);
    c.validate();
    const cplx a(c.left_anchor, 0.0);
    const cplx up(c.left_anchor, c.Q);
    const cplx top(c.x, c.Q);
    const cplx z0(c.x, c.eta0);
    cplx I = m.integrate(a, up) + m.integrate(up, top) + m.integrate(top, z0);
    cplx mz0 = m(z0);
    PleijelResult r;
    r.raw = I.imag() / pi;
    r.correction = -c.eta0 / pi * mz0.real();
    r.estimate = r.raw + r.correction;
    r.remainder = c.eta0 * std::abs(mz0.imag());
    return r;
}

PleijelResult pleijel_count(const Transform& m, double E, double eta0, double left_anchor,
                            double Q) {
    ContourSpec c;
    c.kind = ContourSpec::Kind::L;
    c.x = E;
    c.eta0 = eta0;
    c.left_anchor = left_anchor;
    c.Q = Q;
    return pleijel_count(m, c);
}

cplx full_contour_integral(const Transform& m, const ContourSpec& c) {
    c.validate();
    const cplx pts[6] = {{c.x, -c.eta0}, {c.x, -c.Q}, {c.left_anchor, -c.Q},
                         {c.left_anchor, c.Q}, {c.x, c.Q}, {c.x, c.eta0}};
    cplx I = 0.0;
    for (int i = 0; i < 5; ++i) I += m.integrate(pts[i], pts[i + 1]);
    return I / cplx(0.0, 2.0 * pi);
}

PleijelResult pleijel_interval(const Transform& m, double x, double x2, double eta0, double Q) {
    ContourSpec c;
    c.kind = ContourSpec::Kind::gamma;
    c.x = x;
    c.x2 = x2;
    c.eta0 = eta0;
    c.Q = Q;
    c.validate();
    const cplx p0(x, eta0);
    const cplx p1(x, Q);
    const cplx p2(x2, Q);
    const cplx p3(x2, eta0);
    cplx I = m.integrate(p0, p1) + m.integrate(p1, p2) + m.integrate(p2, p3);
    cplx ml = m(p0);
    cplx mr = m(p3);
    PleijelResult r;
    r.raw = I.imag() / pi;
    r.correction = eta0 / pi * (ml.real() - mr.real());
    r.estimate = r.raw + r.correction;
    r.remainder = eta0 * (std::abs(ml) + std::abs(mr));
    return r;
}

}  // namespace mplab::counting
