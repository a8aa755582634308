#pragma once

#include <span>
#include <vector>

namespace srvar {

double normal_cdf(double x);
/// Inverse of the standard normal CDF; accurate deep into both tails.
double normal_quantile(double p);
double normal_log_density(double x, double mean, double variance);

/// Empirical quantile with linear interpolation between order statistics
/// (position (n - 1) * prob). `sorted` must be ascending and non-empty.
double quantile_sorted(std::span<const double> sorted, double prob);
double quantile(std::vector<double> values, double prob);

/// Arithmetic mean; NaN for empty input.
double mean(std::span<const double> values);
/// Sample standard deviation with divisor n - 1; zero for a single value.
double standard_deviation(std::span<const double> values);

}  // namespace srvar
