#include "srvar/sv.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "srvar/errors.hpp"

namespace srvar {

const MixtureTable& ksc_mixture_table() {
  static const MixtureTable table = [] {
    constexpr double kLogChiSquaredMean = 1.2704;
    MixtureTable t{
        {0.00730, 0.10556, 0.00002, 0.04395, 0.34001, 0.24566, 0.25750},
        {-10.12999, -3.97281, -8.56686, 2.77786, 0.61942, 1.79518, -1.08819},
        {5.79596, 2.61369, 5.17950, 0.16735, 0.64009, 0.34023, 1.26261},
    };
    for (double& m : t.m) m -= kLogChiSquaredMean;
    return t;
  }();
  return table;
}

double linearize(double residual, double offset) { return std::log(residual * residual + offset); }

std::array<double, MixtureTable::kComponents> mixture_probabilities(double ystar, double h, const MixtureTable& table,
                                                                     bool* underflow) {
  std::array<double, MixtureTable::kComponents> logw{};
  double max_logw = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < MixtureTable::kComponents; ++k) {
    const double d = ystar - h - table.m[k];
    logw[k] = std::log(table.q[k]) - 0.5 * std::log(2.0 * std::numbers::pi * table.v2[k]) - 0.5 * d * d / table.v2[k];
    if (logw[k] > max_logw) max_logw = logw[k];
  }
  if (underflow) *underflow = false;
  if (!std::isfinite(max_logw)) {
    if (underflow) *underflow = true;
    return table.q;
  }
  std::array<double, MixtureTable::kComponents> prob{};
  double total = 0.0;
  for (std::size_t k = 0; k < MixtureTable::kComponents; ++k) {
    prob[k] = std::exp(logw[k] - max_logw);
    total += prob[k];
  }
  for (double& pk : prob) pk /= total;
  return prob;
}

IndicatorDraw sample_mixture_indicators(const Eigen::VectorXd& ystar, const Eigen::VectorXd& h,
                                        const MixtureTable& table, Rng& rng) {
  if (ystar.size() != h.size()) throw ValidationError("indicator draw needs ystar and h of equal length");
  IndicatorDraw out;
  out.component.resize(static_cast<std::size_t>(ystar.size()));
  for (Index t = 0; t < ystar.size(); ++t) {
    bool underflow = false;
    const auto prob = mixture_probabilities(ystar(t), h(t), table, &underflow);
    if (underflow) ++out.underflow_fallbacks;
    const double u = rng.uniform();
    double cumulative = 0.0;
    int chosen = static_cast<int>(MixtureTable::kComponents) - 1;
    for (std::size_t k = 0; k < MixtureTable::kComponents; ++k) {
      cumulative += prob[k];
      if (u < cumulative) {
        chosen = static_cast<int>(k);
        break;
      }
    }
    out.component[static_cast<std::size_t>(t)] = chosen;
  }
  return out;
}

TridiagonalCholesky::TridiagonalCholesky(const Eigen::VectorXd& diagonal, const Eigen::VectorXd& off_diagonal) {
  const Index n = diagonal.size();
  if (n < 1 || off_diagonal.size() != n - 1) throw ValidationError("tridiagonal factor: bad dimensions");
  diag_.resize(n);
  sub_.resize(n - 1);
  double pivot = diagonal(0);
  for (Index i = 0; i < n; ++i) {
    if (i > 0) {
      sub_(i - 1) = off_diagonal(i - 1) / diag_(i - 1);
      pivot = diagonal(i) - sub_(i - 1) * sub_(i - 1);
    }
    if (!(pivot > 0.0)) throw NumericalError("tridiagonal precision is not positive definite");
    diag_(i) = std::sqrt(pivot);
  }
}

Eigen::VectorXd TridiagonalCholesky::solve_lower(const Eigen::VectorXd& b) const {
  Eigen::VectorXd x(b.size());
  x(0) = b(0) / diag_(0);
  for (Index i = 1; i < b.size(); ++i) x(i) = (b(i) - sub_(i - 1) * x(i - 1)) / diag_(i);
  return x;
}

Eigen::VectorXd TridiagonalCholesky::solve_upper(const Eigen::VectorXd& b) const {
  const Index n = b.size();
  Eigen::VectorXd x(n);
  x(n - 1) = b(n - 1) / diag_(n - 1);
  for (Index i = n - 2; i >= 0; --i) x(i) = (b(i) - sub_(i) * x(i + 1)) / diag_(i);
  return x;
}

Eigen::VectorXd TridiagonalCholesky::solve(const Eigen::VectorXd& b) const { return solve_upper(solve_lower(b)); }

LogVolatilityPosterior log_volatility_posterior(const Eigen::VectorXd& ystar, const std::vector<int>& component,
                                                double sigma2_eta, double h0_mean, double h0_var,
                                                const MixtureTable& table) {
  const Index n = ystar.size();
  if (n < 1 || static_cast<Index>(component.size()) != n) throw ValidationError("log-volatility: bad dimensions");
  if (!(sigma2_eta > 0.0) || !(h0_var > 0.0)) throw ValidationError("log-volatility: variances must be positive");
  const double walk = 1.0 / sigma2_eta;
  LogVolatilityPosterior post;
  post.diagonal.resize(n);
  post.off_diagonal = Eigen::VectorXd::Constant(n - 1, -walk);
  post.rhs.resize(n);
  for (Index t = 0; t < n; ++t) {
    const auto k = static_cast<std::size_t>(component[static_cast<std::size_t>(t)]);
    const double obs = 1.0 / table.v2[k];
    post.diagonal(t) = obs + (t == 0 ? 1.0 / h0_var : walk) + (t + 1 < n ? walk : 0.0);
    post.rhs(t) = (ystar(t) - table.m[k]) * obs;
  }
  post.rhs(0) += h0_mean / h0_var;
  return post;
}

Eigen::VectorXd sample_log_volatility(const Eigen::VectorXd& ystar, const std::vector<int>& component,
                                      double sigma2_eta, double h0_mean, double h0_var, const MixtureTable& table,
                                      Rng& rng) {
  const LogVolatilityPosterior post = log_volatility_posterior(ystar, component, sigma2_eta, h0_mean, h0_var, table);
  const TridiagonalCholesky chol(post.diagonal, post.off_diagonal);
  Eigen::VectorXd z(ystar.size());
  for (Index t = 0; t < z.size(); ++t) z(t) = rng.normal();
  return chol.solve(post.rhs) + chol.solve_upper(z);
}

double sample_innovation_variance(const Eigen::VectorXd& h, double h0, double prior_shape, double prior_scale,
                                  Rng& rng) {
  const Index n = h.size();
  if (n < 1) throw ValidationError("innovation variance needs a non-empty path");
  double ss = (h(0) - h0) * (h(0) - h0);
  for (Index t = 1; t < n; ++t) ss += (h(t) - h(t - 1)) * (h(t) - h(t - 1));
  const double shape = prior_shape + 0.5 * static_cast<double>(n);
  const double scale = prior_scale + 0.5 * ss;
  return scale / rng.gamma(shape);
}

double sample_initial_logvol(double h1, double sigma2_eta, double prior_mean, double prior_var, Rng& rng) {
  const double precision = 1.0 / prior_var + 1.0 / sigma2_eta;
  const double mean = (prior_mean / prior_var + h1 / sigma2_eta) / precision;
  return mean + rng.normal() / std::sqrt(precision);
}

VolState initial_vol_state(Index T_eff, const Eigen::VectorXd& level, const VolatilitySpec& spec) {
  const Index N = level.size();
  VolState s;
  s.h.resize(T_eff, N);
  for (Index j = 0; j < N; ++j) s.h.col(j).setConstant(level(j));
  s.sigma2_eta = Eigen::VectorXd::Constant(N, spec.innovation_prior_scale() / (spec.innovation_prior_shape() + 1.0));
  s.component = Eigen::MatrixXi::Zero(T_eff, N);
  s.h0 = level;
  return s;
}

VolState update_volatility(VolState state, const Eigen::MatrixXd& residuals, const Eigen::VectorXd& level,
                           const VolatilitySpec& spec, Rng& rng, int* underflow_fallbacks) {
  const MixtureTable& table = ksc_mixture_table();
  const Index T_eff = residuals.rows();
  if (state.h.rows() != T_eff || state.h.cols() != residuals.cols()) {
    throw ValidationError("volatility state does not match the residual matrix");
  }
  for (Index j = 0; j < residuals.cols(); ++j) {
    Eigen::VectorXd ystar(T_eff);
    for (Index t = 0; t < T_eff; ++t) ystar(t) = linearize(residuals(t, j), spec.log_offset());

    IndicatorDraw ind = sample_mixture_indicators(ystar, state.h.col(j), table, rng);
    if (underflow_fallbacks) *underflow_fallbacks += ind.underflow_fallbacks;
    for (Index t = 0; t < T_eff; ++t) state.component(t, j) = ind.component[static_cast<std::size_t>(t)];

    const double s2 = state.sigma2_eta(j);
    state.h.col(j) = sample_log_volatility(ystar, ind.component, s2, state.h0(j), s2, table, rng);
    state.h0(j) = sample_initial_logvol(state.h(0, j), s2, level(j), spec.initial_logvol_variance(), rng);
    state.sigma2_eta(j) = sample_innovation_variance(state.h.col(j), state.h0(j), spec.innovation_prior_shape(),
                                                     spec.innovation_prior_scale(), rng);
    if (!state.h.col(j).allFinite()) throw NumericalError("log-volatility path became non-finite");
  }
  return state;
}

}  // namespace srvar
