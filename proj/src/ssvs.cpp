#include "srvar/ssvs.hpp"

#include <cmath>

#include "srvar/errors.hpp"

namespace srvar {

double effective_row_variance(bool included, double baseline, const SsvsSpec& spec) {
  const double c = included ? spec.slab_multiplier() : spec.spike_multiplier();
  return c * c * baseline;
}

Eigen::VectorXd InclusionState::row_variances(const SsvsSpec& spec) const {
  Eigen::VectorXd v(gamma.size());
  for (Index k = 0; k < gamma.size(); ++k) v(k) = effective_row_variance(gamma(k) == 1, baseline_v(k), spec);
  return v;
}

double inclusion_probability(const Eigen::RowVectorXd& coefficients, const Eigen::RowVectorXd& prior_mean,
                             double baseline, const Eigen::VectorXd& sigma_diag, const SsvsSpec& spec) {
  const double c0 = spec.spike_multiplier();
  const double c1 = spec.slab_multiplier();
  const double pi = spec.prior_inclusion();
  // log N(b; m, c1^2 v s) - log N(b; m, c0^2 v s), summed over equations.
  double log_odds = std::log(pi) - std::log1p(-pi);
  for (Index j = 0; j < coefficients.size(); ++j) {
    const double d = coefficients(j) - prior_mean(j);
    const double base = baseline * sigma_diag(j);
    log_odds += std::log(c0 / c1) - 0.5 * d * d / base * (1.0 / (c1 * c1) - 1.0 / (c0 * c0));
  }
  if (log_odds >= 0.0) return 1.0 / (1.0 + std::exp(-log_odds));
  const double e = std::exp(log_odds);
  return e / (1.0 + e);
}

InclusionState sample_inclusion(const Eigen::MatrixXd& B, const Eigen::MatrixXd& M0, const Eigen::VectorXd& baseline_v,
                                const Eigen::VectorXd& sigma_diag, const SsvsSpec& spec, bool include_intercept,
                                Rng& rng) {
  const Index K = B.rows();
  if (M0.rows() != K || M0.cols() != B.cols() || baseline_v.size() != K || sigma_diag.size() != B.cols()) {
    throw ValidationError("SSVS inputs have inconsistent dimensions");
  }
  InclusionState out;
  out.baseline_v = baseline_v;
  out.gamma.resize(K);
  for (Index k = 0; k < K; ++k) {
    if (include_intercept && k == 0 && spec.force_intercept()) {
      out.gamma(k) = 1;
      continue;
    }
    const double prob = inclusion_probability(B.row(k), M0.row(k), baseline_v(k), sigma_diag, spec);
    out.gamma(k) = rng.uniform() < prob ? 1 : 0;
  }
  return out;
}

}  // namespace srvar
