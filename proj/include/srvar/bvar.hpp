#pragma once

#include <Eigen/Dense>
#include <vector>

#include "srvar/dataset.hpp"
#include "srvar/random.hpp"

namespace srvar {

/**
 * Stacked VAR(p) regression Y = X B + E.
 *
 * Row t of X is [1, y_{t-1}', ..., y_{t-p}'] (the leading 1 only with an
 * intercept): lag-major, variables in dataset order within each lag block.
 * Y holds rows p..T-1 of the data, so T_eff = T - p.
 */
struct DesignMatrices {
  Eigen::MatrixXd Y;
  Eigen::MatrixXd X;
  int p = 1;
  bool include_intercept = true;

  Index T_eff() const { return Y.rows(); }
  Index N() const { return Y.cols(); }
  Index K() const { return X.cols(); }
};

/// Row of B (and column of X) holding lag `lag` (1-based) of variable `variable`.
inline Index lag_row(int lag, Index variable, Index n_variables, bool include_intercept) {
  return (include_intercept ? 1 : 0) + static_cast<Index>(lag - 1) * n_variables + variable;
}

DesignMatrices build_design(const Eigen::MatrixXd& values, int p, bool include_intercept);
DesignMatrices build_design(const Dataset& ds, int p, bool include_intercept);

struct ArVariances {
  Eigen::VectorXd variance;
  /// Columns whose estimate hit the 1e-12 floor (constant or perfectly fit).
  std::vector<bool> floored;
};

inline constexpr double kVarianceFloor = 1e-12;

/// Residual variance of a univariate AR(p) with intercept fitted to each
/// column by least squares. Divisor T_eff - p - 1, at least 1.
ArVariances ar_residual_variances(const Eigen::MatrixXd& values, int p);
ArVariances ar_residual_variances(const Dataset& ds, int p);

/**
 * Matrix-normal inverse-Wishart parameters:
 * B | Sigma ~ MN(mean, row_covariance, Sigma), Sigma ~ IW(dof, scale).
 * Used both as a prior and as a posterior.
 */
class NiwParameters {
 public:
  /// Checks dimensions, dof > N - 1, and that row_covariance and scale factor
  /// as symmetric positive definite.
  NiwParameters(Eigen::MatrixXd mean, Eigen::MatrixXd row_covariance, double dof, Eigen::MatrixXd scale);

  const Eigen::MatrixXd& mean() const { return mean_; }
  const Eigen::MatrixXd& row_covariance() const { return row_cov_; }
  double dof() const { return dof_; }
  const Eigen::MatrixXd& scale() const { return scale_; }

  Index K() const { return mean_.rows(); }
  Index N() const { return mean_.cols(); }

  /// Same parameters with the row covariance replaced (SSVS uses this).
  NiwParameters with_row_covariance(Eigen::MatrixXd row_covariance) const;

 private:
  Eigen::MatrixXd mean_;
  Eigen::MatrixXd row_cov_;
  double dof_;
  Eigen::MatrixXd scale_;
};

using NiwPrior = NiwParameters;
using NiwPosterior = NiwParameters;

/**
 * Minnesota hyperparameters.
 *
 * Larger lambda1 means a TIGHTER prior: the variance of lag l of variable j
 * is (1 / (lambda1 * l^lambda3 * sigma_j))^2, scaled per equation by Sigma.
 */
struct MinnesotaHyper {
  MinnesotaHyper(double lambda1, double lambda3, double own_lag_mean = 1.0, double intercept_scale = 100.0);

  double lambda1;
  double lambda3;
  double own_lag_mean;
  double intercept_scale;
};

/// Conjugate Minnesota prior given per-variable AR residual variances.
NiwPrior minnesota_prior(int p, const Eigen::VectorXd& ar_variances, const MinnesotaHyper& hyper,
                         bool include_intercept);
/// Same, with the residual variances estimated from `ds`.
NiwPrior minnesota_prior(int p, const Dataset& ds, const MinnesotaHyper& hyper, bool include_intercept);

/// Conjugate update with Cholesky-based solves. An empty design returns the prior.
NiwPosterior niw_posterior(const NiwPrior& prior, const DesignMatrices& d);

/// Inverse-Wishart draw, mean S / (nu - N - 1). Bartlett decomposition of the
/// Wishart on S^{-1}, then inversion through its triangular factor.
Eigen::MatrixXd sample_inverse_wishart(double nu, const Eigen::MatrixXd& S, Rng& rng);

/// M + L_V Z L_Sigma' for a given K x N matrix Z.
Eigen::MatrixXd matrix_normal_transform(const Eigen::MatrixXd& M, const Eigen::MatrixXd& V,
                                        const Eigen::MatrixXd& Sigma, const Eigen::MatrixXd& Z);

/// Matrix-normal draw; Z is filled column-major from `rng`.
Eigen::MatrixXd sample_matrix_normal(const Eigen::MatrixXd& M, const Eigen::MatrixXd& V,
                                     const Eigen::MatrixXd& Sigma, Rng& rng);

/// Normal posterior of one equation's coefficients.
struct EquationPosterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd precision;
};

/**
 * Per-equation posterior under diagonal stochastic volatility.
 *
 * Equation j is a weighted regression with weights exp(-h_tj), prior mean
 * column j of M0 and prior covariance V0 * scale_j.
 */
std::vector<EquationPosterior> heteroskedastic_posteriors(const NiwPrior& prior, const DesignMatrices& d,
                                                          const Eigen::MatrixXd& h, const Eigen::VectorXd& scale);

/// One K x N coefficient draw from heteroskedastic_posteriors(), equation by equation.
Eigen::MatrixXd draw_coefficients_heteroskedastic(const NiwPrior& prior, const DesignMatrices& d,
                                                  const Eigen::MatrixXd& h, const Eigen::VectorXd& scale, Rng& rng);

}  // namespace srvar
