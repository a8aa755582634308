#include "srvar/forecast.hpp"

#include <algorithm>
#include <cmath>

#include "srvar/errors.hpp"
#include "srvar/stats.hpp"

namespace srvar {

PredictiveModel predictive_model(const PosteriorResult& result) {
  if (result.draws.empty()) throw ValidationError("cannot forecast from an empty posterior");
  PredictiveModel model;
  model.variables = result.data.variables();
  model.p = result.model.p();
  model.include_intercept = result.model.include_intercept();
  if (const auto& elb = result.model.elb()) {
    for (const auto& name : elb->applies_to()) model.elb_columns.push_back(result.data.require_column(name));
    std::sort(model.elb_columns.begin(), model.elb_columns.end());
    model.bound = elb->bound();
  }
  const Index T = result.data.T();
  for (const Draw& d : result.draws) {
    PredictiveDraw pd;
    pd.B = d.B;
    pd.sigma = d.sigma;
    if (d.h) {
      pd.h_last = d.h->row(d.h->rows() - 1).transpose();
      pd.sigma2_eta = d.sigma2_eta;
    }
    const Eigen::MatrixXd& data = d.shadow ? *d.shadow : result.data.values();
    pd.initial_lags = data.bottomRows(std::min<Index>(model.p, T));
    model.draws.push_back(std::move(pd));
  }
  return model;
}

double spectral_radius(const Eigen::MatrixXd& B, int p, bool include_intercept) {
  const Index N = B.cols();
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(N * p, N * p);
  const Index offset = include_intercept ? 1 : 0;
  companion.topRows(N) = B.middleRows(offset, N * p).transpose();
  if (p > 1) companion.bottomLeftCorner(N * (p - 1), N * (p - 1)).setIdentity();
  return Eigen::EigenSolver<Eigen::MatrixXd>(companion, false).eigenvalues().cwiseAbs().maxCoeff();
}

ForecastResult forecast(const PredictiveModel& model, const std::vector<int>& horizons, int paths, Rng& rng,
                        const ForecastOptions& options) {
  if (model.draws.empty()) throw ValidationError("cannot forecast from an empty posterior");
  if (paths < 1) throw ValidationError("forecast needs at least one path");
  if (horizons.empty()) throw ValidationError("forecast needs at least one horizon");
  for (int h : horizons) {
    if (h < 1) throw ValidationError("forecast horizons must be positive");
  }
  const int H = *std::max_element(horizons.begin(), horizons.end());
  const Index N = static_cast<Index>(model.variables.size());
  const int p = model.p;
  const Index K = (model.include_intercept ? 1 : 0) + N * p;
  const std::size_t R = model.draws.size();

  std::vector<bool> usable(R, true);
  if (options.reject_explosive) {
    bool any = false;
    for (std::size_t r = 0; r < R; ++r) {
      usable[r] = spectral_radius(model.draws[r].B, p, model.include_intercept) < 1.0;
      any = any || usable[r];
    }
    if (!any) throw NumericalError("every posterior draw is explosive");
  }

  // Lower Cholesky factors of Sigma, one per draw.
  std::vector<Eigen::MatrixXd> chol(R);
  for (std::size_t r = 0; r < R; ++r) {
    if (model.draws[r].sigma) {
      Eigen::LLT<Eigen::MatrixXd> llt(*model.draws[r].sigma);
      if (llt.info() != Eigen::Success) throw NumericalError("posterior Sigma draw is not positive definite");
      chol[r] = llt.matrixL();
    }
  }

  ForecastResult out;
  out.horizons = horizons;
  out.variables = model.variables;
  out.elb_columns = model.elb_columns;
  out.bound = model.bound;
  out.shadow.reserve(static_cast<std::size_t>(paths));
  out.observed.reserve(static_cast<std::size_t>(paths));

  std::size_t next = 0;
  Eigen::VectorXd x(K), z(N), shock(N);
  for (int d = 0; d < paths; ++d) {
    while (!usable[next % R]) ++next;
    const std::size_t r = next % R;
    ++next;
    const PredictiveDraw& draw = model.draws[r];
    if (draw.B.rows() != K || draw.B.cols() != N || draw.initial_lags.rows() != p) {
      throw ValidationError("posterior draw has inconsistent dimensions");
    }

    // history rows: p initial lags then the simulated path.
    Eigen::MatrixXd history(p + H, N);
    history.topRows(p) = draw.initial_lags;
    Eigen::VectorXd h;
    if (draw.h_last) h = *draw.h_last;
    for (int step = 0; step < H; ++step) {
      const Index t = p + step;
      if (model.include_intercept) x(0) = 1.0;
      for (int lag = 1; lag <= p; ++lag) x.segment(lag_row(lag, 0, N, model.include_intercept), N) = history.row(t - lag);
      if (draw.h_last) {
        for (Index i = 0; i < N; ++i) h(i) += std::sqrt((*draw.sigma2_eta)(i)) * rng.normal();
        for (Index i = 0; i < N; ++i) shock(i) = std::exp(0.5 * h(i)) * rng.normal();
      } else {
        for (Index i = 0; i < N; ++i) z(i) = rng.normal();
        shock = chol[r] * z;
      }
      if (options.zero_shocks) shock.setZero();
      history.row(t) = (draw.B.transpose() * x + shock).transpose();
    }

    Eigen::MatrixXd shadow = history.bottomRows(H);
    Eigen::MatrixXd observed = shadow;
    for (Index j : model.elb_columns) observed.col(j) = observed.col(j).cwiseMax(model.bound);
    out.shadow.push_back(std::move(shadow));
    out.observed.push_back(std::move(observed));
    out.draw_index.push_back(r);
  }
  return out;
}

ForecastResult forecast(const PosteriorResult& result, const std::vector<int>& horizons, int paths, Rng& rng,
                        const ForecastOptions& options) {
  return forecast(predictive_model(result), horizons, paths, rng, options);
}

QuantileTable quantiles(const ForecastResult& fc, const std::vector<double>& probs, Series series) {
  if (probs.empty()) throw ValidationError("quantiles need at least one probability");
  for (double pr : probs) {
    if (!(pr > 0.0 && pr < 1.0)) throw ValidationError("quantile probabilities must lie in (0, 1)");
  }
  const auto& paths = series == Series::shadow ? fc.shadow : fc.observed;
  if (paths.empty()) throw ValidationError("quantiles of an empty forecast");
  QuantileTable table;
  table.horizons = fc.horizons;
  table.variables = fc.variables;
  table.probs = probs;
  std::vector<double> values(paths.size());
  for (int h : fc.horizons) {
    for (std::size_t j = 0; j < fc.variables.size(); ++j) {
      for (std::size_t d = 0; d < paths.size(); ++d) values[d] = paths[d](h - 1, static_cast<Index>(j));
      std::sort(values.begin(), values.end());
      for (double pr : probs) table.values.push_back(quantile_sorted(values, pr));
    }
  }
  return table;
}

}  // namespace srvar
