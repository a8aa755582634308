#include "srvar/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "srvar/errors.hpp"
#include "srvar/stats.hpp"

namespace srvar {

namespace {

CensorMask initial_mask(const Dataset& ds, const ModelSpec& model) {
  if (!model.elb()) return {};
  return censored_cells(ds, *model.elb());
}

const ModelSpec& check_elb_variables(const ModelSpec& model, const Dataset& ds) {
  if (model.elb()) {
    for (const auto& name : model.elb()->applies_to()) ds.require_column(name);
  }
  return model;
}

double model_bound(const ModelSpec& model) { return model.elb() ? model.elb()->bound() : 0.0; }

void check_prior(const NiwPrior& prior, const Dataset& ds, const ModelSpec& model) {
  if (prior.N() != ds.N() || prior.K() != model.regressors(ds.N())) {
    throw ValidationError("prior dimensions (K = " + std::to_string(prior.K()) + ", N = " + std::to_string(prior.N()) +
                          ") do not match the model (K = " + std::to_string(model.regressors(ds.N())) +
                          ", N = " + std::to_string(ds.N()) + ")");
  }
}

// Runs one block, tagging numerical failures with where they happened.
template <typename F>
void run_block(int iteration, const char* block, F&& body) {
  try {
    body();
  } catch (const NumericalError& e) {
    throw NumericalError("iteration " + std::to_string(iteration) + ", block '" + block + "': " + e.what());
  }
}

}  // namespace

GibbsChain::GibbsChain(const Dataset& ds, const ModelSpec& model, const NiwPrior& prior, Rng& rng)
    : model_(check_elb_variables(model, ds)),
      prior_(prior),
      effective_prior_(prior),
      latent_(ds.values(), initial_mask(ds, model), model_bound(model)) {
  check_prior(prior_, ds, model_);
  ar_variances_ = ar_residual_variances(latent_.completed(), model_.p()).variance;
  log_level_ = ar_variances_.array().log();

  const DesignMatrices design = build_design(latent_.completed(), model_.p(), model_.include_intercept());
  if (model_.sv_enabled()) vol_ = initial_vol_state(design.T_eff(), log_level_, *model_.volatility());
  if (model_.ssvs()) {
    InclusionState inc;
    inc.baseline_v = prior_.row_covariance().diagonal();
    inc.gamma = Eigen::VectorXi::Ones(prior_.K());
    effective_prior_ = prior_.with_row_covariance(inc.row_variances(*model_.ssvs()).asDiagonal());
    inclusion_ = std::move(inc);
  }
  run_block(0, "initialization", [&] {
    const NiwPosterior post = niw_posterior(effective_prior_, design);
    sigma_ = sample_inverse_wishart(post.dof(), post.scale(), rng);
    B_ = sample_matrix_normal(post.mean(), post.row_covariance(), sigma_, rng);
  });
}

void GibbsChain::set_data(const Eigen::MatrixXd& completed, CensorMask mask) {
  if (completed.rows() != latent_.completed().rows() || completed.cols() != latent_.completed().cols()) {
    throw ValidationError("replacement data has the wrong shape");
  }
  LatentState next(completed, mask, latent_.bound());
  for (std::size_t k = 0; k < next.mask().size(); ++k) {
    const Cell& c = next.mask()[k];
    next.assign(k, completed(c.t, c.j));
  }
  latent_ = std::move(next);
}

void GibbsChain::draw_coefficients(const DesignMatrices& design, Rng& rng) {
  if (vol_) {
    B_ = draw_coefficients_heteroskedastic(effective_prior_, design, vol_->h, ar_variances_, rng);
    return;
  }
  const NiwPosterior post = niw_posterior(effective_prior_, design);
  sigma_ = sample_inverse_wishart(post.dof(), post.scale(), rng);
  B_ = sample_matrix_normal(post.mean(), post.row_covariance(), sigma_, rng);
}

void GibbsChain::iterate(Rng& rng) {
  const int it = diagnostics_.iterations;
  const int p = model_.p();

  if (model_.elb() && !latent_.mask().empty()) {
    run_block(it, "shadow", [&] {
      const ResidualPrecision precision =
          vol_ ? ResidualPrecision::diagonal_paths(vol_->h) : ResidualPrecision::constant(sigma_);
      latent_ = sample_shadow_rates(std::move(latent_), B_, precision, p, rng);
      diagnostics_.shadow_updates += static_cast<long>(latent_.mask().size());
    });
  }

  const DesignMatrices design = build_design(latent_.completed(), p, model_.include_intercept());

  if (inclusion_) {
    run_block(it, "ssvs", [&] {
      const Eigen::VectorXd scale = vol_ ? ar_variances_ : Eigen::VectorXd(sigma_.diagonal());
      inclusion_ = sample_inclusion(B_, prior_.mean(), inclusion_->baseline_v, scale, *model_.ssvs(),
                                    model_.include_intercept(), rng);
      effective_prior_ = prior_.with_row_covariance(inclusion_->row_variances(*model_.ssvs()).asDiagonal());
    });
  }

  if (vol_) {
    run_block(it, "volatility", [&] {
      const Eigen::MatrixXd residuals = design.Y - design.X * B_;
      vol_ = update_volatility(std::move(*vol_), residuals, log_level_, *model_.volatility(), rng,
                               &diagnostics_.mixture_underflow_fallbacks);
    });
  }

  run_block(it, "coefficients", [&] { draw_coefficients(design, rng); });
  if (!B_.allFinite()) throw NumericalError("iteration " + std::to_string(it) + ": non-finite coefficients");
  ++diagnostics_.iterations;
}

Draw GibbsChain::snapshot() const {
  Draw d;
  d.B = B_;
  if (vol_) {
    d.h = vol_->h;
    d.sigma2_eta = vol_->sigma2_eta;
  } else {
    d.sigma = sigma_;
  }
  if (model_.elb()) d.shadow = latent_.completed();
  if (inclusion_) d.gamma = inclusion_->gamma;
  return d;
}

PosteriorResult fit(const Dataset& ds, const ModelSpec& model, const NiwPrior& prior, const SamplerConfig& cfg,
                    Rng& rng) {
  validate(model, ds);
  GibbsChain chain(ds, model, prior, rng);
  std::vector<Draw> draws;
  draws.reserve(static_cast<std::size_t>(retained_count(cfg)));
  for (int i = 0; i < cfg.draws(); ++i) {
    chain.iterate(rng);
    if (cfg.retains(i)) draws.push_back(chain.snapshot());
  }
  return PosteriorResult{std::move(draws), model, prior, cfg, ds, chain.ar_variances(), chain.mask(),
                         chain.diagnostics()};
}

Quantity parse_quantity(std::string_view name) {
  if (name == "coefficients") return Quantity::coefficients;
  if (name == "sigma") return Quantity::sigma;
  if (name == "shadow") return Quantity::shadow;
  if (name == "log_volatility") return Quantity::log_volatility;
  if (name == "volatility") return Quantity::volatility;
  if (name == "inclusion") return Quantity::inclusion;
  throw ValidationError("unknown summary quantity '" + std::string(name) + "'");
}

std::vector<std::string> regressor_labels(const std::vector<std::string>& variables, int p, bool include_intercept) {
  std::vector<std::string> labels;
  if (include_intercept) labels.emplace_back("const");
  for (int lag = 1; lag <= p; ++lag) {
    for (const auto& v : variables) labels.push_back(v + ".l" + std::to_string(lag));
  }
  return labels;
}

SummaryTable posterior_summary(const PosteriorResult& result, Quantity quantity, const std::vector<double>& probs) {
  if (result.draws.empty()) throw ValidationError("posterior summary of an empty result");
  for (double pr : probs) {
    if (!(pr >= 0.0 && pr <= 1.0)) throw ValidationError("summary probabilities must lie in [0, 1]");
  }
  const Draw& first = result.draws.front();
  const auto& vars = result.data.variables();
  const auto regressors = regressor_labels(vars, result.model.p(), result.model.include_intercept());

  SummaryTable table;
  table.probs = probs;
  std::vector<double> values(result.draws.size());
  auto add = [&](std::string row_label, std::string col_label, Index r, Index c,
                 const std::function<double(const Draw&)>& get) {
    for (std::size_t d = 0; d < result.draws.size(); ++d) values[d] = get(result.draws[d]);
    SummaryRow row{std::move(row_label), std::move(col_label), r, c, mean(values), standard_deviation(values), {}};
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    for (double pr : probs) row.quantiles.push_back(quantile_sorted(sorted, pr));
    table.rows.push_back(std::move(row));
  };
  auto require = [](bool present, const char* what) {
    if (!present) throw ValidationError(std::string("result has no ") + what + " draws");
  };

  switch (quantity) {
    case Quantity::coefficients:
      for (Index c = 0; c < first.B.cols(); ++c) {
        for (Index r = 0; r < first.B.rows(); ++r) {
          add(regressors[static_cast<std::size_t>(r)], vars[static_cast<std::size_t>(c)], r, c,
              [=](const Draw& d) { return d.B(r, c); });
        }
      }
      break;
    case Quantity::sigma:
      require(first.sigma.has_value(), "Sigma");
      for (Index c = 0; c < first.sigma->cols(); ++c) {
        for (Index r = 0; r < first.sigma->rows(); ++r) {
          add(vars[static_cast<std::size_t>(r)], vars[static_cast<std::size_t>(c)], r, c,
              [=](const Draw& d) { return (*d.sigma)(r, c); });
        }
      }
      break;
    case Quantity::shadow: {
      require(first.shadow.has_value() && result.model.elb().has_value(), "shadow");
      std::vector<Index> cols;
      for (const auto& name : result.model.elb()->applies_to()) cols.push_back(result.data.require_column(name));
      std::sort(cols.begin(), cols.end());
      for (Index c : cols) {
        for (Index t = 0; t < first.shadow->rows(); ++t) {
          add(result.data.time_label(t), vars[static_cast<std::size_t>(c)], t, c,
              [=](const Draw& d) { return (*d.shadow)(t, c); });
        }
      }
      break;
    }
    case Quantity::log_volatility:
    case Quantity::volatility: {
      require(first.h.has_value(), "log-volatility");
      const bool level = quantity == Quantity::volatility;
      const Index p = result.model.p();
      for (Index c = 0; c < first.h->cols(); ++c) {
        for (Index t = 0; t < first.h->rows(); ++t) {
          add(result.data.time_label(t + p), vars[static_cast<std::size_t>(c)], t, c, [=](const Draw& d) {
            const double h = (*d.h)(t, c);
            return level ? std::exp(0.5 * h) : h;
          });
        }
      }
      break;
    }
    case Quantity::inclusion:
      require(first.gamma.has_value(), "inclusion");
      for (Index r = 0; r < first.gamma->size(); ++r) {
        add(regressors[static_cast<std::size_t>(r)], "", r, 0,
            [=](const Draw& d) { return static_cast<double>((*d.gamma)(r)); });
      }
      break;
  }
  return table;
}

}  // namespace srvar
