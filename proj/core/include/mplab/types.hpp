#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mplab {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// theta = E + i*eta. eta may be negative on contour legs.
struct SpectralPoint {
    double E = 0.0;
    double eta = 0.0;

    cplx theta() const { return {E, eta}; }
    double kappa() const { return std::abs(E - 4.0); }
    SpectralPoint conj() const { return {E, -eta}; }

    static SpectralPoint from(cplx z) { return {z.real(), z.imag()}; }

    bool operator==(const SpectralPoint&) const = default;
};

struct DomainParams {
    double c = 1.0;
    double M = 1.0;

    bool operator==(const DomainParams&) const = default;
};

// Raised when a deterministic identity or bound fails during a run.
class InvariantViolation : public std::runtime_error {
public:
    InvariantViolation(const std::string& what, std::string record)
        : std::runtime_error(what), record_(std::move(record)) {}

    const std::string& record() const { return record_; }

private:
    std::string record_;
};

// |a - b| / max(1, |a|, |b|)
inline double scaled_residual(cplx a, cplx b) {
    double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) / scale;
}

}  // namespace mplab
