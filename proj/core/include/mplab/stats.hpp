#pragma once

#include <span>
#include <vector>

namespace mplab::stats {

// Linear interpolation between order statistics (Hyndman-Fan type 7). NaN for empty input.
double quantile(std::span<const double> values, double p);
double median(std::span<const double> values);
double mean(std::span<const double> values);
// Standard error of the mean, sample standard deviation / sqrt(n). NaN for n < 2.
double standard_error(std::span<const double> values);
double max_over_min(std::span<const double> values);

}  // namespace mplab::stats
