#include "srvar/elb.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "srvar/bvar.hpp"
#include "srvar/errors.hpp"
#include "srvar/stats.hpp"

namespace srvar {

CensorMask censored_cells(const Eigen::MatrixXd& observed, const std::vector<Index>& columns, double bound,
                          double tolerance) {
  std::vector<Index> sorted = columns;
  std::sort(sorted.begin(), sorted.end());
  CensorMask mask;
  for (Index t = 0; t < observed.rows(); ++t) {
    for (Index j : sorted) {
      if (observed(t, j) <= bound + tolerance) mask.push_back({t, j});
    }
  }
  return mask;
}

CensorMask censored_cells(const Dataset& ds, const ElbSpec& spec) {
  std::vector<Index> columns;
  for (const auto& name : spec.applies_to()) columns.push_back(ds.require_column(name));
  return censored_cells(ds.values(), columns, spec.bound(), spec.censor_tolerance());
}

LatentState::LatentState(const Eigen::MatrixXd& observed, CensorMask mask, double bound)
    : completed_(observed), mask_(std::move(mask)), bound_(bound) {
  std::sort(mask_.begin(), mask_.end());
  for (const Cell& c : mask_) {
    if (c.t < 0 || c.t >= completed_.rows() || c.j < 0 || c.j >= completed_.cols()) {
      throw ValidationError("censored cell outside the data");
    }
    completed_(c.t, c.j) = bound_;
  }
}

void LatentState::assign(std::size_t k, double value) {
  if (!(value <= bound_)) throw NumericalError("shadow value above the bound");
  const Cell& c = mask_[k];
  completed_(c.t, c.j) = value;
}

ResidualPrecision ResidualPrecision::constant(const Eigen::MatrixXd& sigma) {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw NumericalError("residual covariance is not positive definite");
  ResidualPrecision out;
  Eigen::MatrixXd q = llt.solve(Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols()));
  out.full_ = 0.5 * (q + q.transpose());
  return out;
}

ResidualPrecision ResidualPrecision::diagonal_paths(const Eigen::MatrixXd& log_variance) {
  ResidualPrecision out;
  out.diag_ = (-log_variance.array()).exp();
  return out;
}

double ResidualPrecision::form(Index s, const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  if (full_) return a.dot(*full_ * b);
  return (a.array() * diag_.row(s).transpose().array() * b.array()).sum();
}

ShadowConditional shadow_conditional(Cell cell, const LatentState& state, const Eigen::MatrixXd& B,
                                     const ResidualPrecision& precision, int p) {
  const Eigen::MatrixXd& y = state.completed();
  const Index T = y.rows();
  const Index N = y.cols();
  const Index K = B.rows();
  const bool intercept = K == N * p + 1;
  if (!intercept && K != N * p) throw ValidationError("coefficient rows do not match N * p (+1)");
  if (!std::binary_search(state.mask().begin(), state.mask().end(), cell)) {
    throw ValidationError("cell (" + std::to_string(cell.t) + ", " + std::to_string(cell.j) + ") is not censored");
  }

  // Residual r_s = y_s - B' x_s is affine in the cell value z: r_s = r0_s + (z - z0) g_s.
  // Accumulate P = sum g' Q g and u = sum g' Q r0; conditional mean z0 - u / P.
  double info = 0.0;
  double score = 0.0;
  Eigen::VectorXd x(K), r0(N), g(N);
  for (Index s = std::max<Index>(cell.t, p); s <= std::min<Index>(cell.t + p, T - 1); ++s) {
    if (intercept) x(0) = 1.0;
    for (int lag = 1; lag <= p; ++lag) x.segment(lag_row(lag, 0, N, intercept), N) = y.row(s - lag).transpose();
    r0 = y.row(s).transpose() - B.transpose() * x;
    if (s == cell.t) {
      g = Eigen::VectorXd::Unit(N, cell.j);
    } else {
      const int lag = static_cast<int>(s - cell.t);
      g = -B.row(lag_row(lag, cell.j, N, intercept)).transpose();
    }
    info += precision.form(s - p, g, g);
    score += precision.form(s - p, g, r0);
  }
  if (!(info > 0.0) || !std::isfinite(info)) {
    throw NumericalError("shadow cell (" + std::to_string(cell.t) + ", " + std::to_string(cell.j) +
                         ") has no likelihood information");
  }
  return {y(cell.t, cell.j) - score / info, 1.0 / info};
}

double sample_truncated_normal_upper(double mean, double sd, double upper, Rng& rng) {
  if (!(sd > 0.0)) throw ValidationError("truncated normal needs sd > 0");
  if (upper == INFINITY) return mean + sd * rng.normal();
  const double b = (upper - mean) / sd;
  double z;
  if (b >= -8.0) {
    z = normal_quantile(rng.uniform() * normal_cdf(b));
  } else {
    // -z is a standard normal truncated to [a, inf) with a = -b > 8:
    // exponential proposal with the optimal rate, accept exp(-(x - rate)^2 / 2).
    const double a = -b;
    const double rate = 0.5 * (a + std::sqrt(a * a + 4.0));
    double x;
    do {
      x = a + rng.exponential(rate);
    } while (rng.uniform() > std::exp(-0.5 * (x - rate) * (x - rate)));
    z = -x;
  }
  return std::min(mean + sd * z, upper);
}

LatentState sample_shadow_rates(LatentState state, const Eigen::MatrixXd& B, const ResidualPrecision& precision,
                                int p, Rng& rng) {
  for (std::size_t k = 0; k < state.mask().size(); ++k) {
    const ShadowConditional cond = shadow_conditional(state.mask()[k], state, B, precision, p);
    state.assign(k, sample_truncated_normal_upper(cond.mean, std::sqrt(cond.variance), state.bound(), rng));
  }
  return state;
}

}  // namespace srvar
