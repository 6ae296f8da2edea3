#include "mplab/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mplab/mp_analytics.hpp"
#include "mplab/stats.hpp"

namespace mplab::counting {

double counting_function(std::span<const double> eigenvalues, long N, double E) {
    auto it = std::upper_bound(eigenvalues.begin(), eigenvalues.end(), E);
    return static_cast<double>(it - eigenvalues.begin()) / static_cast<double>(N);
}

double counting_scale(double E, long N) {
    const double n = static_cast<double>(N);
    return std::min(std::sqrt(std::min(E, 4.0)), std::log(n) / n);
}

CountingTable counting_deviation(const std::vector<std::vector<double>>& spectra, long N,
                                 const std::vector<double>& E_grid) {
    if (E_grid.empty()) throw std::invalid_argument("counting_deviation: empty E grid");
    if (spectra.empty()) throw std::invalid_argument("counting_deviation: no replicas");
    for (double E : E_grid) {
        if (!(E > 0.0)) throw std::invalid_argument("counting_deviation: E must be positive");
    }
    CountingTable t;
    t.sup_normalized.assign(spectra.size(), 0.0);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double E : E_grid) {
        const double nmp = mp::cdf(E);
        const double scale = counting_scale(E, N);
        std::vector<double> dev, norm;
        for (std::size_t r = 0; r < spectra.size(); ++r) {
            double d = std::abs(counting_function(spectra[r], N, E) - nmp);
            dev.push_back(d);
            norm.push_back(d / scale);
            t.sup_normalized[r] = std::max(t.sup_normalized[r], d / scale);
        }
        for (const auto& [name, v] : {std::pair{"abs_dev", &dev}, std::pair{"normalized", &norm}}) {
            t.rows.push_back({N, E, name, "q50", stats::quantile(*v, 0.5)});
            t.rows.push_back({N, E, name, "q90", stats::quantile(*v, 0.9)});
            t.rows.push_back({N, E, name, "q95", stats::quantile(*v, 0.95)});
            t.rows.push_back({N, E, name, "mean", stats::mean(*v)});
            t.rows.push_back({N, E, name, "max", *std::max_element(v->begin(), v->end())});
        }
    }
    const auto& s = t.sup_normalized;
    t.rows.push_back({N, nan, "sup_normalized", "q50", stats::quantile(s, 0.5)});
    t.rows.push_back({N, nan, "sup_normalized", "q90", stats::quantile(s, 0.9)});
    t.rows.push_back({N, nan, "sup_normalized", "q95", stats::quantile(s, 0.95)});
    t.rows.push_back({N, nan, "sup_normalized", "mean", stats::mean(s)});
    t.rows.push_back({N, nan, "sup_normalized", "max", *std::max_element(s.begin(), s.end())});
    return t;
}

std::vector<double> classical_locations(long N, long count) {
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(count));
    for (long a = 1; a <= count; ++a) g.push_back(mp::classical_location(a, N));
    return g;
}

std::vector<RigidityEntry> rigidity_report(std::span<const double> eigenvalues, long N,
                                           std::span<const double> gamma) {
    const long half = (N + 1) / 2;
    if (static_cast<long>(eigenvalues.size()) < half || static_cast<long>(gamma.size()) < half) {
        throw std::invalid_argument("rigidity_report: too few eigenvalues or locations");
    }
    const double n = static_cast<double>(N);
    const double logn = std::log(n);
    std::vector<RigidityEntry> out;
    out.reserve(static_cast<std::size_t>(half));
    for (long a = 1; a <= half; ++a) {
        RigidityEntry e;
        e.a = a;
        e.lambda_a = eigenvalues[a - 1];
        e.gamma_a = gamma[a - 1];
        const double dev = std::abs(e.lambda_a - e.gamma_a);
        const double ad = static_cast<double>(a);
        e.stat_bulk = dev * n * n / (ad * logn);
        e.hard_edge = ad <= logn;
        e.stat_edge = e.hard_edge ? dev * n * n / (ad * ad) : std::numeric_limits<double>::quiet_NaN();
        out.push_back(e);
    }
    return out;
}

RigiditySummary summarize_rigidity(const std::vector<RigidityEntry>& report, long N) {
    if (report.empty()) throw std::invalid_argument("summarize_rigidity: empty report");
    const double n = static_cast<double>(N);
    RigiditySummary s;
    for (const auto& e : report) {
        s.max_bulk = std::max(s.max_bulk, e.stat_bulk);
        if (e.hard_edge) s.max_edge = std::max(s.max_edge, e.stat_edge);
    }
    s.hard_edge_scaled = n * n * std::abs(report.front().lambda_a - report.front().gamma_a);
    return s;
}

}  // namespace mplab::counting
