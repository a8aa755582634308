#include "srvar/bvar.hpp"

#include <cmath>
#include <string>

#include "srvar/errors.hpp"

namespace srvar {

namespace {

Eigen::LLT<Eigen::MatrixXd> factor_spd(const Eigen::MatrixXd& m, const char* name) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success || !llt.matrixL().toDenseMatrix().allFinite()) {
    throw NumericalError(std::string("Cholesky factorization failed: ") + name + " is not positive definite");
  }
  return llt;
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

// Precision of a row covariance, exact for the diagonal case used by Minnesota priors.
Eigen::MatrixXd precision_of(const Eigen::MatrixXd& cov, const char* name) {
  const bool diagonal = cov.isDiagonal(0.0);
  if (diagonal) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(cov.rows(), cov.cols());
    for (Index i = 0; i < cov.rows(); ++i) p(i, i) = 1.0 / cov(i, i);
    return p;
  }
  return symmetrized(factor_spd(cov, name).solve(Eigen::MatrixXd::Identity(cov.rows(), cov.cols())));
}

}  // namespace

DesignMatrices build_design(const Eigen::MatrixXd& values, int p, bool include_intercept) {
  const Index T = values.rows();
  const Index N = values.cols();
  if (p < 1) throw ValidationError("lag order must be >= 1");
  if (T <= p) throw ValidationError("need T > p to build the design (T = " + std::to_string(T) + ", p = " +
                                    std::to_string(p) + ")");
  DesignMatrices d;
  d.p = p;
  d.include_intercept = include_intercept;
  const Index T_eff = T - p;
  const Index K = (include_intercept ? 1 : 0) + N * p;
  d.Y = values.bottomRows(T_eff);
  d.X.resize(T_eff, K);
  for (Index t = 0; t < T_eff; ++t) {
    if (include_intercept) d.X(t, 0) = 1.0;
    for (int lag = 1; lag <= p; ++lag) {
      d.X.row(t).segment(lag_row(lag, 0, N, include_intercept), N) = values.row(t + p - lag);
    }
  }
  return d;
}

DesignMatrices build_design(const Dataset& ds, int p, bool include_intercept) {
  return build_design(ds.values(), p, include_intercept);
}

ArVariances ar_residual_variances(const Eigen::MatrixXd& values, int p) {
  const Index T = values.rows();
  if (T <= p + 2) throw ValidationError("AR residual variances need T > p + 2");
  ArVariances out;
  out.variance.resize(values.cols());
  out.floored.assign(static_cast<std::size_t>(values.cols()), false);
  for (Index j = 0; j < values.cols(); ++j) {
    const DesignMatrices d = build_design(Eigen::MatrixXd(values.col(j)), p, true);
    const Eigen::VectorXd beta = d.X.colPivHouseholderQr().solve(d.Y);
    const double ssr = (d.Y - d.X * beta).squaredNorm();
    const double dof = std::max<double>(static_cast<double>(d.T_eff() - p - 1), 1.0);
    double var = ssr / dof;
    if (!(var > kVarianceFloor)) {
      var = kVarianceFloor;
      out.floored[static_cast<std::size_t>(j)] = true;
    }
    out.variance(j) = var;
  }
  return out;
}

ArVariances ar_residual_variances(const Dataset& ds, int p) { return ar_residual_variances(ds.values(), p); }

NiwParameters::NiwParameters(Eigen::MatrixXd mean, Eigen::MatrixXd row_covariance, double dof, Eigen::MatrixXd scale)
    : mean_(std::move(mean)), row_cov_(std::move(row_covariance)), dof_(dof), scale_(std::move(scale)) {
  const Index K = mean_.rows();
  const Index N = mean_.cols();
  if (row_cov_.rows() != K || row_cov_.cols() != K) throw ValidationError("NIW row covariance must be K x K");
  if (scale_.rows() != N || scale_.cols() != N) throw ValidationError("NIW scale must be N x N");
  if (!(dof_ > static_cast<double>(N) - 1.0)) throw ValidationError("NIW degrees of freedom must exceed N - 1");
  if (!row_cov_.isApprox(row_cov_.transpose(), 1e-10)) throw ValidationError("NIW row covariance is not symmetric");
  if (!scale_.isApprox(scale_.transpose(), 1e-10)) throw ValidationError("NIW scale is not symmetric");
  try {
    factor_spd(row_cov_, "row covariance");
    factor_spd(scale_, "scale");
  } catch (const NumericalError& e) {
    throw ValidationError(e.what());
  }
}

NiwParameters NiwParameters::with_row_covariance(Eigen::MatrixXd row_covariance) const {
  return NiwParameters(mean_, std::move(row_covariance), dof_, scale_);
}

MinnesotaHyper::MinnesotaHyper(double lambda1_, double lambda3_, double own_lag_mean_, double intercept_scale_)
    : lambda1(lambda1_), lambda3(lambda3_), own_lag_mean(own_lag_mean_), intercept_scale(intercept_scale_) {
  if (!(lambda1 > 0.0)) throw ValidationError("lambda1 must be > 0");
  if (!(lambda3 >= 0.0)) throw ValidationError("lambda3 must be >= 0");
  if (!(intercept_scale > 0.0)) throw ValidationError("intercept_scale must be > 0");
}

NiwPrior minnesota_prior(int p, const Eigen::VectorXd& ar_variances, const MinnesotaHyper& hyper,
                         bool include_intercept) {
  const Index N = ar_variances.size();
  const Index K = (include_intercept ? 1 : 0) + N * p;
  Eigen::MatrixXd M0 = Eigen::MatrixXd::Zero(K, N);
  Eigen::MatrixXd V0 = Eigen::MatrixXd::Zero(K, K);
  if (include_intercept) V0(0, 0) = hyper.intercept_scale * hyper.intercept_scale;
  for (Index j = 0; j < N; ++j) {
    M0(lag_row(1, j, N, include_intercept), j) = hyper.own_lag_mean;
    const double sd = std::sqrt(ar_variances(j));
    for (int lag = 1; lag <= p; ++lag) {
      const double inv = 1.0 / (hyper.lambda1 * std::pow(static_cast<double>(lag), hyper.lambda3) * sd);
      const Index r = lag_row(lag, j, N, include_intercept);
      V0(r, r) = inv * inv;
    }
  }
  const Eigen::MatrixXd S0 = ar_variances.asDiagonal();
  return NiwPrior(std::move(M0), std::move(V0), static_cast<double>(N) + 2.0, S0);
}

NiwPrior minnesota_prior(int p, const Dataset& ds, const MinnesotaHyper& hyper, bool include_intercept) {
  return minnesota_prior(p, ar_residual_variances(ds, p).variance, hyper, include_intercept);
}

NiwPosterior niw_posterior(const NiwPrior& prior, const DesignMatrices& d) {
  if (d.K() != prior.K() || d.N() != prior.N()) throw ValidationError("design and prior dimensions disagree");
  if (d.T_eff() == 0) return prior;

  const Eigen::MatrixXd P0 = precision_of(prior.row_covariance(), "V0");
  const Eigen::MatrixXd Pn = symmetrized(P0 + d.X.transpose() * d.X);
  const auto Pn_llt = factor_spd(Pn, "V0^-1 + X'X");
  const Eigen::MatrixXd rhs = P0 * prior.mean() + d.X.transpose() * d.Y;
  Eigen::MatrixXd Mn = Pn_llt.solve(rhs);
  Eigen::MatrixXd Vn = symmetrized(Pn_llt.solve(Eigen::MatrixXd::Identity(d.K(), d.K())));

  // Pn Mn = rhs, so Mn' Vn^{-1} Mn = Mn' rhs.
  Eigen::MatrixXd Sn = prior.scale() + d.Y.transpose() * d.Y + prior.mean().transpose() * P0 * prior.mean() -
                       Mn.transpose() * rhs;
  Sn = symmetrized(Sn);
  factor_spd(Sn, "posterior scale Sn");
  return NiwPosterior(std::move(Mn), std::move(Vn), prior.dof() + static_cast<double>(d.T_eff()), std::move(Sn));
}

Eigen::MatrixXd sample_inverse_wishart(double nu, const Eigen::MatrixXd& S, Rng& rng) {
  const Index N = S.rows();
  if (!(nu > static_cast<double>(N) - 1.0)) throw ValidationError("inverse-Wishart needs nu > N - 1");
  const Eigen::MatrixXd S_inv = symmetrized(factor_spd(S, "inverse-Wishart scale").solve(Eigen::MatrixXd::Identity(N, N)));
  const Eigen::MatrixXd L = factor_spd(S_inv, "inverse of inverse-Wishart scale").matrixL();

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  for (Index i = 0; i < N; ++i) {
    A(i, i) = std::sqrt(rng.chi_squared(nu - static_cast<double>(i)));
    for (Index k = 0; k < i; ++k) A(i, k) = rng.normal();
  }
  // Wishart draw W = C C' with C = L A lower triangular; Sigma = W^{-1} = C^{-T} C^{-1}.
  const Eigen::MatrixXd C = L * A;
  const Eigen::MatrixXd C_inv = C.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(N, N));
  return symmetrized(C_inv.transpose() * C_inv);
}

Eigen::MatrixXd matrix_normal_transform(const Eigen::MatrixXd& M, const Eigen::MatrixXd& V,
                                        const Eigen::MatrixXd& Sigma, const Eigen::MatrixXd& Z) {
  const Eigen::MatrixXd Lv = factor_spd(V, "matrix-normal row covariance").matrixL();
  const Eigen::MatrixXd Ls = factor_spd(Sigma, "matrix-normal column covariance").matrixL();
  return M + Lv * Z * Ls.transpose();
}

Eigen::MatrixXd sample_matrix_normal(const Eigen::MatrixXd& M, const Eigen::MatrixXd& V,
                                     const Eigen::MatrixXd& Sigma, Rng& rng) {
  Eigen::MatrixXd Z(M.rows(), M.cols());
  for (Index j = 0; j < Z.cols(); ++j) {
    for (Index i = 0; i < Z.rows(); ++i) Z(i, j) = rng.normal();
  }
  return matrix_normal_transform(M, V, Sigma, Z);
}

std::vector<EquationPosterior> heteroskedastic_posteriors(const NiwPrior& prior, const DesignMatrices& d,
                                                          const Eigen::MatrixXd& h, const Eigen::VectorXd& scale) {
  if (d.K() != prior.K() || d.N() != prior.N()) throw ValidationError("design and prior dimensions disagree");
  if (h.rows() != d.T_eff() || h.cols() != d.N()) throw ValidationError("log-volatility must be T_eff x N");
  if (scale.size() != d.N()) throw ValidationError("scale must have N entries");
  if (!h.allFinite()) throw NumericalError("non-finite log-volatility in coefficient draw");

  const Eigen::MatrixXd P0 = precision_of(prior.row_covariance(), "V0");
  std::vector<EquationPosterior> out;
  out.reserve(static_cast<std::size_t>(d.N()));
  for (Index j = 0; j < d.N(); ++j) {
    const Eigen::VectorXd w = (-h.col(j)).array().exp();
    const Eigen::MatrixXd Xw = d.X.array().colwise() * w.array();
    EquationPosterior post;
    post.precision = symmetrized(P0 / scale(j) + d.X.transpose() * Xw);
    const Eigen::VectorXd rhs = P0 * prior.mean().col(j) / scale(j) + Xw.transpose() * d.Y.col(j);
    post.mean = factor_spd(post.precision, "equation posterior precision").solve(rhs);
    out.push_back(std::move(post));
  }
  return out;
}

Eigen::MatrixXd draw_coefficients_heteroskedastic(const NiwPrior& prior, const DesignMatrices& d,
                                                  const Eigen::MatrixXd& h, const Eigen::VectorXd& scale, Rng& rng) {
  const auto posts = heteroskedastic_posteriors(prior, d, h, scale);
  Eigen::MatrixXd B(d.K(), d.N());
  for (Index j = 0; j < d.N(); ++j) {
    const auto& post = posts[static_cast<std::size_t>(j)];
    const auto llt = factor_spd(post.precision, "equation posterior precision");
    Eigen::VectorXd z(d.K());
    for (Index k = 0; k < d.K(); ++k) z(k) = rng.normal();
    // Precision L L' gives covariance L^{-T} L^{-1}.
    B.col(j) = post.mean + llt.matrixU().solve(z);
  }
  return B;
}

}  // namespace srvar
