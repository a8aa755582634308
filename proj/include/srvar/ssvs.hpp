#pragma once

#include <Eigen/Dense>

#include "srvar/config.hpp"
#include "srvar/random.hpp"

namespace srvar {

/// One inclusion indicator per predictor row of B, shared by all equations.
struct InclusionState {
  Eigen::VectorXi gamma;       // K entries in {0, 1}
  Eigen::VectorXd baseline_v;  // Minnesota row variances

  /// Row variances implied by gamma: c1^2 or c0^2 times the baseline.
  Eigen::VectorXd row_variances(const SsvsSpec& spec) const;
};

/// c1^2 * baseline when included, c0^2 * baseline otherwise.
double effective_row_variance(bool included, double baseline, const SsvsSpec& spec);

/// P(gamma_k = 1 | B_k) for one row, given the prior mean row, baseline
/// variance and the per-equation scales Sigma_jj.
double inclusion_probability(const Eigen::RowVectorXd& coefficients, const Eigen::RowVectorXd& prior_mean,
                             double baseline, const Eigen::VectorXd& sigma_diag, const SsvsSpec& spec);

/// Draws every row's indicator given B, row by row. With force_intercept the
/// intercept row (row 0 when `include_intercept`) stays at 1 and consumes no draw.
InclusionState sample_inclusion(const Eigen::MatrixXd& B, const Eigen::MatrixXd& M0, const Eigen::VectorXd& baseline_v,
                                const Eigen::VectorXd& sigma_diag, const SsvsSpec& spec, bool include_intercept,
                                Rng& rng);

}  // namespace srvar
