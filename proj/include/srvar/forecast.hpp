#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "srvar/gibbs.hpp"
#include "srvar/random.hpp"

namespace srvar {

/// What one posterior draw contributes to predictive simulation.
struct PredictiveDraw {
  Eigen::MatrixXd B;                         // K x N
  std::optional<Eigen::MatrixXd> sigma;      // constant volatility
  std::optional<Eigen::VectorXd> h_last;     // log-variances at the last effective period
  std::optional<Eigen::VectorXd> sigma2_eta;
  Eigen::MatrixXd initial_lags;              // p x N, oldest first, from the completed data
};

/// Everything forecast() needs, detached from the full posterior result so it
/// can be stored and reloaded.
struct PredictiveModel {
  std::vector<std::string> variables;
  int p = 1;
  bool include_intercept = true;
  std::vector<Index> elb_columns;
  double bound = 0.0;
  std::vector<PredictiveDraw> draws;
};

PredictiveModel predictive_model(const PosteriorResult& result);

struct ForecastOptions {
  /// Test hook: every shock is zero.
  bool zero_shocks = false;
  /// Skip draws whose companion matrix has spectral radius >= 1.
  bool reject_explosive = false;
};

struct ForecastResult {
  std::vector<int> horizons;
  std::vector<std::string> variables;
  std::vector<Index> elb_columns;
  double bound = 0.0;
  std::vector<Eigen::MatrixXd> shadow;    // D paths, each H_max x N
  std::vector<Eigen::MatrixXd> observed;  // shadow with ELB columns censored at the bound
  std::vector<std::size_t> draw_index;    // posterior draw behind each path
};

/**
 * Simulates `paths` predictive paths out to max(horizons).
 *
 * Path d uses the next posterior draw in retained order (wrapping). The VAR
 * runs on shadow values starting from that draw's completed data; shocks are
 * N(0, Sigma), or N(0, exp(h)) with h continuing its random walk under SV.
 */
ForecastResult forecast(const PredictiveModel& model, const std::vector<int>& horizons, int paths, Rng& rng,
                        const ForecastOptions& options = {});
ForecastResult forecast(const PosteriorResult& result, const std::vector<int>& horizons, int paths, Rng& rng,
                        const ForecastOptions& options = {});

enum class Series { shadow, observed };

struct QuantileTable {
  std::vector<int> horizons;
  std::vector<std::string> variables;
  std::vector<double> probs;
  std::vector<double> values;  // [horizon][variable][prob]

  double at(std::size_t horizon, std::size_t variable, std::size_t prob) const {
    return values[(horizon * variables.size() + variable) * probs.size() + prob];
  }
};

/// Per requested horizon and variable, linear-interpolation quantiles across paths.
QuantileTable quantiles(const ForecastResult& fc, const std::vector<double>& probs = {0.10, 0.50, 0.90},
                        Series series = Series::shadow);

/// Largest eigenvalue modulus of the VAR companion matrix.
double spectral_radius(const Eigen::MatrixXd& B, int p, bool include_intercept);

}  // namespace srvar
