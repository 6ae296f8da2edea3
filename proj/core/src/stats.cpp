#include "mplab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mplab::stats {

namespace {
constexpr double nan = std::numeric_limits<double>::quiet_NaN();
}

double quantile(std::span<const double> values, double p) {
    if (values.empty()) return nan;
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    double h = (static_cast<double>(v.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
    auto lo = static_cast<std::size_t>(std::floor(h));
    std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double median(std::span<const double> values) { return quantile(values, 0.5); }

double mean(std::span<const double> values) {
    if (values.empty()) return nan;
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double standard_error(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) return nan;
    double m = mean(values);
    double ss = 0.0;
    for (double x : values) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

double max_over_min(std::span<const double> values) {
    if (values.empty()) return nan;
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi / *lo;
}

}  // namespace mplab::stats
