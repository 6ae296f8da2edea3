#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mplab/types.hpp"

namespace mplab {

// E list crossed with an eta rule. Text form: "E=2,-0.5;eta=over_n:20" where the
// rule is fixed:v (eta = v), over_n:v (eta = v/N) or m_sqrt_e_over_n (eta = M sqrt(E)/N,
// M/N for E <= 0).
struct GridSpec {
    enum class EtaRule { fixed, over_n, m_sqrt_e_over_n };

    std::vector<double> E;
    EtaRule rule = EtaRule::fixed;
    double value = 1.0;

    static GridSpec parse(std::string_view text);
    std::string to_string() const;
    std::vector<SpectralPoint> resolve(long N, const DomainParams& domain = {}) const;

    bool operator==(const GridSpec&) const = default;
};

// eta_0 = M sqrt(E) / N, or M / N when E <= 0.
double pleijel_eta0(double E, long N, double M);

// N eta / |sqrt(theta)| >= M
bool above_threshold(const SpectralPoint& p, long N, double M);

}  // namespace mplab
