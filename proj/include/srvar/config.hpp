#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srvar/dataset.hpp"

namespace srvar {

// Model and sampler settings. Each validates in its constructor and exposes only
// const accessors; "modification" produces a new object (ModelSpec::with_*).

/// Effective-lower-bound censoring for a set of variables.
class ElbSpec {
 public:
  ElbSpec(std::vector<std::string> applies_to, double bound, double censor_tolerance = 1e-6);

  const std::vector<std::string>& applies_to() const { return applies_to_; }
  double bound() const { return bound_; }
  /// Observations with value <= bound + tolerance are treated as censored.
  double censor_tolerance() const { return censor_tolerance_; }

 private:
  std::vector<std::string> applies_to_;
  double bound_;
  double censor_tolerance_;
};

/// Diagonal stochastic volatility. The innovation variance of each log-variance
/// random walk has an InverseGamma(shape, scale) prior; the initial log-variance
/// is N(log AR residual variance, initial_logvol_variance).
class VolatilitySpec {
 public:
  explicit VolatilitySpec(bool enabled = true, double innovation_prior_shape = 3.0,
                          double innovation_prior_scale = 0.01, double initial_logvol_variance = 10.0,
                          double log_offset = 1e-4);

  bool enabled() const { return enabled_; }
  double innovation_prior_shape() const { return shape_; }
  double innovation_prior_scale() const { return scale_; }
  double initial_logvol_variance() const { return initial_var_; }
  /// c in log(e^2 + c).
  double log_offset() const { return offset_; }

 private:
  bool enabled_;
  double shape_;
  double scale_;
  double initial_var_;
  double offset_;
};

/// Row-wise spike-and-slab selection: row variance is c0^2 or c1^2 times the
/// Minnesota baseline, with prior inclusion probability pi.
class SsvsSpec {
 public:
  explicit SsvsSpec(double spike_multiplier = 0.01, double slab_multiplier = 10.0, double prior_inclusion = 0.5,
                    bool force_intercept = true);

  double spike_multiplier() const { return spike_; }
  double slab_multiplier() const { return slab_; }
  double prior_inclusion() const { return inclusion_; }
  bool force_intercept() const { return force_intercept_; }

 private:
  double spike_;
  double slab_;
  double inclusion_;
  bool force_intercept_;
};

class ModelSpec {
 public:
  explicit ModelSpec(int p, bool include_intercept = true);

  ModelSpec with_elb(ElbSpec elb) const;
  ModelSpec with_volatility(VolatilitySpec volatility) const;
  ModelSpec with_ssvs(SsvsSpec ssvs) const;

  int p() const { return p_; }
  bool include_intercept() const { return include_intercept_; }
  const std::optional<ElbSpec>& elb() const { return elb_; }
  const std::optional<VolatilitySpec>& volatility() const { return volatility_; }
  const std::optional<SsvsSpec>& ssvs() const { return ssvs_; }

  bool sv_enabled() const { return volatility_ && volatility_->enabled(); }
  /// Number of regressors K = intercept + N * p.
  Index regressors(Index n_variables) const { return (include_intercept_ ? 1 : 0) + n_variables * p_; }

 private:
  int p_;
  bool include_intercept_;
  std::optional<ElbSpec> elb_;
  std::optional<VolatilitySpec> volatility_;
  std::optional<SsvsSpec> ssvs_;
};

/// Gibbs run length. `draws` counts every iteration including burn-in; thinning
/// applies after burn-in is discarded.
class SamplerConfig {
 public:
  explicit SamplerConfig(int draws, int burn_in = 0, int thin = 1, std::uint64_t seed = 0);

  int draws() const { return draws_; }
  int burn_in() const { return burn_in_; }
  int thin() const { return thin_; }
  std::uint64_t seed() const { return seed_; }

  /// Whether 0-based iteration `i` is stored.
  bool retains(int i) const { return i >= burn_in_ && (i - burn_in_ + 1) % thin_ == 0; }

 private:
  int draws_;
  int burn_in_;
  int thin_;
  std::uint64_t seed_;
};

/// floor((draws - burn_in) / thin).
int retained_count(const SamplerConfig& cfg);

/// Every problem found when checking `model` against `ds`; empty when usable.
/// The effective sample T - p must exceed p + 10.
std::vector<std::string> diagnose(const ModelSpec& model, const Dataset& ds);

/// Throws ValidationError listing the diagnostics; returns `model` otherwise.
const ModelSpec& validate(const ModelSpec& model, const Dataset& ds);

}  // namespace srvar
