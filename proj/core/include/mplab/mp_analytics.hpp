#pragma once

#include <span>

#include "mplab/types.hpp"

namespace mplab::mp {

struct MPModel {
    double d = 1.0;
    double lambda_minus = 0.0;
    double lambda_plus = 4.0;

    static MPModel with_ratio(double d);
    double density(double E) const;
};

// Literal Marchenko-Pastur density; for d = 1 this is (1/2pi) sqrt(4/E - 1) on (0, 4].
double density(double E, double d = 1.0);

// Stieltjes transform of the d = 1 law. The branch has Im > 0 for eta > 0,
// Im < 0 for eta < 0, and is the real limit from above for real theta off [0, 4].
cplx stieltjes(cplx theta);
inline cplx stieltjes(const SpectralPoint& p) { return stieltjes(p.theta()); }

// n_MP(E) for d = 1, closed form.
double cdf(double E);

// gamma_a with n_MP(gamma_a) = a / N.
double classical_location(long a, long N);

bool in_domain_S(double E, double eta, const DomainParams& params = {});

struct EdgeRatios {
    double min_edge_gap = 0.0;  // min |Delta + 1/2| / (kappa^2 + eta^2)^(1/4)
    double min_im = 0.0;        // min Im Delta * sqrt(kappa + eta) / eta
    double max_im = 0.0;
    std::size_t points = 0;
};

EdgeRatios edge_bound_ratios(std::span<const SpectralPoint> grid);

}  // namespace mplab::mp
