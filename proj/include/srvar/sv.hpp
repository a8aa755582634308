#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "srvar/config.hpp"
#include "srvar/random.hpp"

namespace srvar {

/**
 * Seven-component normal mixture approximating log(chi^2_1).
 *
 * Means are stored on the log(chi^2_1) scale itself: the -1.2704 centring
 * constant is already folded into `m`, so linearized observations
 * log(e^2 + c) are compared with h + m directly and never shifted again.
 */
struct MixtureTable {
  static constexpr std::size_t kComponents = 7;
  std::array<double, kComponents> q;
  std::array<double, kComponents> m;
  std::array<double, kComponents> v2;
};

/// Kim, Shephard and Chib (1998) constants.
const MixtureTable& ksc_mixture_table();

/// log(residual^2 + offset).
double linearize(double residual, double offset);

/// Posterior component probabilities for one observation, computed in log
/// space. When every weighted density underflows, returns the prior q and
/// sets *underflow.
std::array<double, MixtureTable::kComponents> mixture_probabilities(double ystar, double h, const MixtureTable& table,
                                                                     bool* underflow = nullptr);

struct IndicatorDraw {
  std::vector<int> component;  // 0-based index into the table
  int underflow_fallbacks = 0;
};

IndicatorDraw sample_mixture_indicators(const Eigen::VectorXd& ystar, const Eigen::VectorXd& h,
                                        const MixtureTable& table, Rng& rng);

/**
 * Cholesky factor of a symmetric positive-definite tridiagonal matrix,
 * stored as its diagonal and subdiagonal only (2n - 1 numbers).
 */
class TridiagonalCholesky {
 public:
  TridiagonalCholesky(const Eigen::VectorXd& diagonal, const Eigen::VectorXd& off_diagonal);

  /// Solves (L L') x = b.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  /// Solves L' x = b.
  Eigen::VectorXd solve_upper(const Eigen::VectorXd& b) const;
  /// Solves L x = b.
  Eigen::VectorXd solve_lower(const Eigen::VectorXd& b) const;

  Index size() const { return diag_.size(); }
  Index stored_elements() const { return diag_.size() + sub_.size(); }

 private:
  Eigen::VectorXd diag_;
  Eigen::VectorXd sub_;
};

/// Gaussian conditional of a log-volatility path in banded precision form.
struct LogVolatilityPosterior {
  Eigen::VectorXd diagonal;
  Eigen::VectorXd off_diagonal;
  Eigen::VectorXd rhs;

  Eigen::VectorXd mean() const { return TridiagonalCholesky(diagonal, off_diagonal).solve(rhs); }
};

/**
 * Precision and linear term for h_1..h_n given linearized observations,
 * mixture components, a random walk with innovation variance sigma2_eta,
 * and h_1 ~ N(h0_mean, h0_var).
 */
LogVolatilityPosterior log_volatility_posterior(const Eigen::VectorXd& ystar, const std::vector<int>& component,
                                                double sigma2_eta, double h0_mean, double h0_var,
                                                const MixtureTable& table);

/// All-at-once draw of the path: mean + L^{-T} z, O(n).
Eigen::VectorXd sample_log_volatility(const Eigen::VectorXd& ystar, const std::vector<int>& component,
                                      double sigma2_eta, double h0_mean, double h0_var, const MixtureTable& table,
                                      Rng& rng);

/// InverseGamma(shape + n/2, scale + sum (h_t - h_{t-1})^2 / 2) with h_0 = h0.
double sample_innovation_variance(const Eigen::VectorXd& h, double h0, double prior_shape, double prior_scale,
                                  Rng& rng);

/// Initial log-variance h_0 given h_1 = h_0 + xi and h_0 ~ N(prior_mean, prior_var).
double sample_initial_logvol(double h1, double sigma2_eta, double prior_mean, double prior_var, Rng& rng);

/// Per-variable volatility state; h and component are T_eff x N.
struct VolState {
  Eigen::MatrixXd h;
  Eigen::VectorXd sigma2_eta;
  Eigen::MatrixXi component;
  Eigen::VectorXd h0;
};

/// Constant paths at the prior level, innovation variance at its prior mode.
VolState initial_vol_state(Index T_eff, const Eigen::VectorXd& level, const VolatilitySpec& spec);

/**
 * One SV Gibbs pass per column of `residuals`: mixture components, then the
 * path given h_0, then h_0, then sigma2_eta. `level` holds each variable's
 * prior mean for h_0. Columns are processed in order from one stream.
 */
VolState update_volatility(VolState state, const Eigen::MatrixXd& residuals, const Eigen::VectorXd& level,
                           const VolatilitySpec& spec, Rng& rng, int* underflow_fallbacks = nullptr);

}  // namespace srvar
