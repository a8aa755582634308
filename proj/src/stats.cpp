#include "srvar/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "srvar/errors.hpp"

namespace srvar {

double normal_cdf(double x) { return 0.5 * boost::math::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (p <= 0.0) return -INFINITY;
  if (p >= 1.0) return INFINITY;
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double normal_log_density(double x, double mean, double variance) {
  const double d = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * variance) + d * d / variance);
}

double quantile_sorted(std::span<const double> sorted, double prob) {
  if (sorted.empty()) throw ValidationError("quantile of an empty sample");
  const double pos = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile(std::vector<double> values, double prob) {
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, prob);
}

// Shifted by the first value so that constant input is reproduced exactly.
double mean(std::span<const double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double shift = values.front();
  double sum = 0.0;
  for (double v : values) sum += v - shift;
  return shift + sum / static_cast<double>(values.size());
}

double standard_deviation(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace srvar
