#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "srvar/bvar.hpp"
#include "srvar/config.hpp"
#include "srvar/forecast.hpp"

namespace srvar::cli {

/// Exit codes shared by every command.
inline constexpr int kOk = 0;
inline constexpr int kValidationFailure = 1;
inline constexpr int kNumericalFailure = 2;

/**
 * Parsed run configuration (JSON). Recognised keys:
 *
 *   model.p, model.include_intercept,
 *   model.elb.applies_to, model.elb.bound, model.elb.censor_tolerance,
 *   model.volatility.enabled (+ innovation_prior_shape, innovation_prior_scale,
 *     initial_logvol_variance, log_offset),
 *   model.ssvs.spike_multiplier, .slab_multiplier, .prior_inclusion, .force_intercept,
 *   prior.lambda1, prior.lambda3,
 *   sampler.draws, sampler.burn_in, sampler.thin, sampler.seed,
 *   data.path, forecast.horizons, forecast.draws, output.dir
 *
 * Required: model.p, prior.lambda1, prior.lambda3, sampler.draws, sampler.seed,
 * data.path, output.dir. Relative paths resolve against the config file's directory.
 */
struct RunConfig {
  ModelSpec model;
  MinnesotaHyper hyper;
  SamplerConfig sampler;
  std::filesystem::path data_path;
  std::vector<int> horizons;
  int forecast_draws;
  std::filesystem::path output_dir;
  std::string echo;  // the config as parsed, compact JSON
};

RunConfig load_config(const std::filesystem::path& path);

/// Writes the predictive draws that cmd_forecast reloads.
void save_predictive_model(const PredictiveModel& model, const std::filesystem::path& path);
PredictiveModel load_predictive_model(const std::filesystem::path& path);

/// Fits the model and writes coefficients_summary.csv, shadow_median.csv and
/// shadowplot_<var>.svg (ELB), volatility_mean.csv (SV), inclusion.csv (SSVS),
/// posterior_draws.json and result.meta into output.dir.
int cmd_fit(const std::filesystem::path& config_path, std::ostream& err);

/// Writes forecast_quantiles.csv and fanchart_<var>.svg per ELB variable from
/// the stored posterior, or from a fresh fit with `refit`.
int cmd_forecast(const std::filesystem::path& config_path, bool refit, std::ostream& err);

/// Writes the demo dataset to `out` and its ground truth to truth_<name> alongside.
int cmd_simulate(int T, std::uint64_t seed, const std::filesystem::path& out, std::ostream& err);

}  // namespace srvar::cli
