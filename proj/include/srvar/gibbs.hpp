#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srvar/bvar.hpp"
#include "srvar/config.hpp"
#include "srvar/dataset.hpp"
#include "srvar/elb.hpp"
#include "srvar/random.hpp"
#include "srvar/ssvs.hpp"
#include "srvar/sv.hpp"

namespace srvar {

/// One retained Gibbs state. Exactly one of `sigma` and (`h`, `sigma2_eta`) is set.
struct Draw {
  Eigen::MatrixXd B;                        // K x N
  std::optional<Eigen::MatrixXd> sigma;     // N x N, constant volatility
  std::optional<Eigen::MatrixXd> h;         // T_eff x N log-variances
  std::optional<Eigen::VectorXd> sigma2_eta;
  std::optional<Eigen::MatrixXd> shadow;    // T x N completed data, ELB only
  std::optional<Eigen::VectorXi> gamma;     // K indicators, SSVS only
};

struct Diagnostics {
  int iterations = 0;
  long shadow_updates = 0;
  int mixture_underflow_fallbacks = 0;
};

struct PosteriorResult {
  std::vector<Draw> draws;
  ModelSpec model;
  NiwPrior prior;
  SamplerConfig sampler;
  Dataset data;
  Eigen::VectorXd ar_variances;  // residual variances of the initialized data
  CensorMask mask;
  Diagnostics diagnostics;
};

/**
 * Gibbs chain state and its block updates.
 *
 * Each iteration runs, in order: (1) shadow rates if ELB, (2) rebuild the
 * design from the completed data, (3) SSVS indicators and row variances,
 * (4) SV mixture components, paths, initial values and innovation variances,
 * (5) coefficients: a joint NIW draw of (B, Sigma) without SV, or the
 * equation-wise weighted draw with SV.
 */
class GibbsChain {
 public:
  /// Initializes censored cells at the bound, log-volatilities at the log AR
  /// residual variances, every SSVS indicator at 1, and (B, Sigma) from one
  /// conjugate draw on the initialized data. Only the ELB variable names are
  /// checked here; fit() applies the full validate().
  GibbsChain(const Dataset& ds, const ModelSpec& model, const NiwPrior& prior, Rng& rng);

  void iterate(Rng& rng);
  Draw snapshot() const;

  /// Replaces the data (completed values and mask), keeping parameters.
  /// Censored cells keep the supplied values, which must be <= bound.
  void set_data(const Eigen::MatrixXd& completed, CensorMask mask);

  const Eigen::MatrixXd& completed() const { return latent_.completed(); }
  const Eigen::MatrixXd& coefficients() const { return B_; }
  const Eigen::MatrixXd& sigma() const { return sigma_; }
  const Eigen::VectorXd& ar_variances() const { return ar_variances_; }
  const CensorMask& mask() const { return latent_.mask(); }
  const Diagnostics& diagnostics() const { return diagnostics_; }

 private:
  void draw_coefficients(const DesignMatrices& design, Rng& rng);

  ModelSpec model_;
  NiwPrior prior_;
  NiwPrior effective_prior_;
  LatentState latent_;
  Eigen::VectorXd ar_variances_;
  Eigen::VectorXd log_level_;
  Eigen::MatrixXd B_;
  Eigen::MatrixXd sigma_;
  std::optional<VolState> vol_;
  std::optional<InclusionState> inclusion_;
  Diagnostics diagnostics_;
};

/// Runs `cfg.draws()` iterations and keeps every thin-th post-burn-in state.
/// All randomness comes from `rng`.
PosteriorResult fit(const Dataset& ds, const ModelSpec& model, const NiwPrior& prior, const SamplerConfig& cfg,
                    Rng& rng);

enum class Quantity { coefficients, sigma, shadow, log_volatility, volatility, inclusion };

Quantity parse_quantity(std::string_view name);

struct SummaryRow {
  std::string row_label;
  std::string column_label;
  Index row = 0;
  Index col = 0;
  double mean = 0.0;
  double sd = 0.0;
  std::vector<double> quantiles;
};

struct SummaryTable {
  std::vector<double> probs;
  std::vector<SummaryRow> rows;
};

/**
 * Mean, standard deviation and quantiles across retained draws.
 *
 * coefficients: each B entry (row = regressor, column = equation).
 * sigma: each Sigma entry. shadow: every cell of the ELB variables.
 * log_volatility / volatility: h and exp(h/2) per effective time.
 * inclusion: gamma frequencies per regressor row.
 */
SummaryTable posterior_summary(const PosteriorResult& result, Quantity quantity,
                               const std::vector<double>& probs = {0.10, 0.50, 0.90});

/// "const", then "<var>.l<lag>" in design order.
std::vector<std::string> regressor_labels(const std::vector<std::string>& variables, int p, bool include_intercept);

}  // namespace srvar
