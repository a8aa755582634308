#pragma once

#include <Eigen/Dense>
#include <compare>
#include <optional>
#include <vector>

#include "srvar/config.hpp"
#include "srvar/dataset.hpp"
#include "srvar/random.hpp"

namespace srvar {

/// A (time, variable) cell of the data matrix.
struct Cell {
  Index t = 0;
  Index j = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Censored cells in row-major (t, then j) order.
using CensorMask = std::vector<Cell>;

/// Cells of ELB variables with value <= bound + censor_tolerance.
CensorMask censored_cells(const Dataset& ds, const ElbSpec& spec);
CensorMask censored_cells(const Eigen::MatrixXd& observed, const std::vector<Index>& columns, double bound,
                          double tolerance);

/**
 * Observed data with censored cells replaced by the current shadow values.
 *
 * Censored cells always hold a value <= bound; every other cell is the
 * observed value, untouched. A new state starts censored cells at the bound.
 */
class LatentState {
 public:
  LatentState(const Eigen::MatrixXd& observed, CensorMask mask, double bound);

  const Eigen::MatrixXd& completed() const { return completed_; }
  const CensorMask& mask() const { return mask_; }
  double bound() const { return bound_; }

  /// Overwrites censored cell `mask()[k]`; values above the bound are rejected.
  void assign(std::size_t k, double value);

 private:
  Eigen::MatrixXd completed_;
  CensorMask mask_;
  double bound_;
};

/**
 * Precision of the VAR residual at each effective time index.
 *
 * Either one full N x N precision shared by all periods (constant Sigma), or
 * a diagonal precision exp(-h_t) per period (stochastic volatility).
 */
class ResidualPrecision {
 public:
  static ResidualPrecision constant(const Eigen::MatrixXd& sigma);
  /// `log_variance` is T_eff x N.
  static ResidualPrecision diagonal_paths(const Eigen::MatrixXd& log_variance);

  /// a' Q_s b for effective time s.
  double form(Index s, const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

 private:
  std::optional<Eigen::MatrixXd> full_;
  Eigen::MatrixXd diag_;
};

struct ShadowConditional {
  double mean = 0.0;
  double variance = 0.0;
};

/**
 * Full conditional of the latent value at a censored cell given every other
 * completed value, the coefficients B (K x N) and the residual precision.
 *
 * Collects each equation the cell enters: as the time-t response (when
 * t >= p) and as the lag-l regressor of all N equations at t + l, l = 1..p,
 * inside the sample. Each is linear in the cell, so precisions add.
 */
ShadowConditional shadow_conditional(Cell cell, const LatentState& state, const Eigen::MatrixXd& B,
                                     const ResidualPrecision& precision, int p);

/// Draw from N(mean, sd^2) restricted to (-inf, upper]. Inverse CDF on the
/// standardized scale; below -8 standard deviations a tail exponential
/// rejection sampler is used.
double sample_truncated_normal_upper(double mean, double sd, double upper, Rng& rng);

/// Single-site Gibbs sweep over the mask in row-major order.
LatentState sample_shadow_rates(LatentState state, const Eigen::MatrixXd& B, const ResidualPrecision& precision,
                                int p, Rng& rng);

}  // namespace srvar
