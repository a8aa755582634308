#include "srvar/config.hpp"

#include <cmath>
#include <set>

#include "srvar/errors.hpp"

namespace srvar {

ElbSpec::ElbSpec(std::vector<std::string> applies_to, double bound, double censor_tolerance)
    : applies_to_(std::move(applies_to)), bound_(bound), censor_tolerance_(censor_tolerance) {
  if (applies_to_.empty()) throw ValidationError("ElbSpec.applies_to must name at least one variable");
  std::set<std::string> seen(applies_to_.begin(), applies_to_.end());
  if (seen.size() != applies_to_.size()) throw ValidationError("ElbSpec.applies_to has duplicate names");
  if (!std::isfinite(bound_)) throw ValidationError("ElbSpec.bound must be finite");
  if (!(censor_tolerance_ >= 0.0)) throw ValidationError("ElbSpec.censor_tolerance must be >= 0");
}

VolatilitySpec::VolatilitySpec(bool enabled, double innovation_prior_shape, double innovation_prior_scale,
                               double initial_logvol_variance, double log_offset)
    : enabled_(enabled),
      shape_(innovation_prior_shape),
      scale_(innovation_prior_scale),
      initial_var_(initial_logvol_variance),
      offset_(log_offset) {
  if (!(shape_ > 0.0)) throw ValidationError("VolatilitySpec.innovation_prior_shape must be > 0");
  if (!(scale_ > 0.0)) throw ValidationError("VolatilitySpec.innovation_prior_scale must be > 0");
  if (!(initial_var_ > 0.0)) throw ValidationError("VolatilitySpec.initial_logvol_variance must be > 0");
  if (!(offset_ > 0.0)) throw ValidationError("VolatilitySpec.log_offset must be > 0");
}

SsvsSpec::SsvsSpec(double spike_multiplier, double slab_multiplier, double prior_inclusion, bool force_intercept)
    : spike_(spike_multiplier), slab_(slab_multiplier), inclusion_(prior_inclusion), force_intercept_(force_intercept) {
  if (!(spike_ > 0.0 && spike_ < slab_)) throw ValidationError("SsvsSpec needs 0 < spike_multiplier < slab_multiplier");
  if (!(inclusion_ > 0.0 && inclusion_ < 1.0)) throw ValidationError("SsvsSpec.prior_inclusion must lie in (0, 1)");
}

ModelSpec::ModelSpec(int p, bool include_intercept) : p_(p), include_intercept_(include_intercept) {
  if (p_ < 1) throw ValidationError("ModelSpec.p must be >= 1");
}

ModelSpec ModelSpec::with_elb(ElbSpec elb) const {
  ModelSpec copy = *this;
  copy.elb_ = std::move(elb);
  return copy;
}

ModelSpec ModelSpec::with_volatility(VolatilitySpec volatility) const {
  ModelSpec copy = *this;
  copy.volatility_ = std::move(volatility);
  return copy;
}

ModelSpec ModelSpec::with_ssvs(SsvsSpec ssvs) const {
  ModelSpec copy = *this;
  copy.ssvs_ = std::move(ssvs);
  return copy;
}

SamplerConfig::SamplerConfig(int draws, int burn_in, int thin, std::uint64_t seed)
    : draws_(draws), burn_in_(burn_in), thin_(thin), seed_(seed) {
  if (draws_ < 1) throw ValidationError("SamplerConfig.draws must be >= 1");
  if (burn_in_ < 0) throw ValidationError("SamplerConfig.burn_in must be >= 0");
  if (thin_ < 1) throw ValidationError("SamplerConfig.thin must be >= 1");
  if (burn_in_ >= draws_) throw ValidationError("SamplerConfig.burn_in must be < draws");
}

int retained_count(const SamplerConfig& cfg) { return (cfg.draws() - cfg.burn_in()) / cfg.thin(); }

std::vector<std::string> diagnose(const ModelSpec& model, const Dataset& ds) {
  std::vector<std::string> problems;
  if (model.elb()) {
    for (const auto& name : model.elb()->applies_to()) {
      if (!ds.column(name)) problems.push_back("ELB variable '" + name + "' is not in the dataset");
    }
  }
  if (ds.T() - model.p() <= model.p() + 10) {
    problems.push_back("sample too short: T = " + std::to_string(ds.T()) + " leaves " +
                       std::to_string(ds.T() - model.p()) + " effective observations, need more than p + 10 = " +
                       std::to_string(model.p() + 10));
  }
  return problems;
}

const ModelSpec& validate(const ModelSpec& model, const Dataset& ds) {
  const auto problems = diagnose(model, ds);
  if (!problems.empty()) {
    std::string msg = problems.front();
    for (std::size_t i = 1; i < problems.size(); ++i) msg += "; " + problems[i];
    throw ValidationError(msg);
  }
  return model;
}

}  // namespace srvar
