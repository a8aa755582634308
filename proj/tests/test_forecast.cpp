#include <doctest.h>

#include <cmath>

#include "srvar/errors.hpp"
#include "srvar/forecast.hpp"
#include "support.hpp"

using namespace srvar;

namespace {

PredictiveModel ar1_model(double c, double b, double s2, double y_last) {
  PredictiveModel m;
  m.variables = {"y"};
  m.p = 1;
  PredictiveDraw d;
  d.B = Eigen::Vector2d(c, b);
  d.sigma = Eigen::MatrixXd::Constant(1, 1, s2);
  d.initial_lags = Eigen::MatrixXd::Constant(1, 1, y_last);
  m.draws.push_back(d);
  return m;
}

}  // namespace

TEST_CASE("null dynamics forecast zero") {
  PredictiveModel m;
  m.variables = {"a", "b"};
  m.p = 2;
  PredictiveDraw d;
  d.B = Eigen::MatrixXd::Zero(5, 2);
  d.sigma = Eigen::MatrixXd::Identity(2, 2);
  d.initial_lags = Eigen::MatrixXd::Constant(2, 2, 3.0);
  m.draws.push_back(d);
  srvar::Rng rng(61);
  ForecastOptions zero;
  zero.zero_shocks = true;
  const ForecastResult fc = forecast(m, {1, 4, 8}, 20, rng, zero);
  CHECK(fc.shadow.size() == 20);
  for (const auto& path : fc.shadow) {
    CHECK(path.rows() == 8);
    CHECK(path.isZero(0.0));
  }
}

TEST_CASE("one-step zero-shock forecast is the VAR mean") {
  srvar::Rng rng(62);
  PredictiveModel m;
  m.variables = {"a", "b"};
  m.p = 2;
  PredictiveDraw d;
  d.B = testing::random_matrix(5, 2, rng);
  d.sigma = Eigen::MatrixXd::Identity(2, 2);
  d.initial_lags = testing::random_matrix(2, 2, rng);  // rows y_{T-1}, y_T
  m.draws.push_back(d);
  ForecastOptions zero;
  zero.zero_shocks = true;
  const ForecastResult fc = forecast(m, {1}, 3, rng, zero);
  const Eigen::VectorXd want = d.B.row(0).transpose() + d.B.middleRows(1, 2).transpose() * d.initial_lags.row(1).transpose() +
                               d.B.middleRows(3, 2).transpose() * d.initial_lags.row(0).transpose();
  CHECK((fc.shadow[0].row(0).transpose() - want).cwiseAbs().maxCoeff() < 1e-14);

  const QuantileTable q = quantiles(fc, {0.1, 0.5, 0.9});
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < 3; ++k) CHECK(q.at(0, j, k) == fc.shadow[0](0, static_cast<Index>(j)));
}

TEST_CASE("AR(1) forecast mean and fan width") {
  const double c = 0.3, b = 0.7, s2 = 0.5, y_last = 2.5;
  srvar::Rng rng(63);
  const int D = 10000;
  const std::vector<int> horizons = {1, 2, 4, 8, 12};
  const ForecastResult fc = forecast(ar1_model(c, b, s2, y_last), horizons, D, rng);
  const QuantileTable q = quantiles(fc, {0.1, 0.9});
  double last_width = 0.0;
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    const int h = horizons[i];
    const double mean = c * (1 - std::pow(b, h)) / (1 - b) + std::pow(b, h) * y_last;
    const double var = s2 * (1 - std::pow(b, 2 * h)) / (1 - b * b);
    double sum = 0.0;
    for (const auto& path : fc.shadow) sum += path(h - 1, 0);
    CHECK(std::abs(sum / D - mean) < 3 * std::sqrt(var / D));
    const double width = q.at(i, 0, 1) - q.at(i, 0, 0);
    CHECK(width == doctest::Approx(2 * 1.2815516 * std::sqrt(var)).epsilon(0.05));
    CHECK(width >= last_width - 0.02);
    last_width = width;
  }
}

TEST_CASE("quantiles and censoring") {
  PredictiveModel m = ar1_model(0.0, 0.9, 0.3, 0.2);
  m.variables = {"rate"};
  m.elb_columns = {0};
  m.bound = 0.125;
  srvar::Rng rng(64);
  const ForecastResult fc = forecast(m, {1, 4, 8}, 2000, rng);
  for (std::size_t d = 0; d < fc.shadow.size(); ++d) {
    CHECK(fc.observed[d] == fc.shadow[d].cwiseMax(0.125));
  }
  const std::vector<double> probs = {0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95};
  for (Series s : {Series::shadow, Series::observed}) {
    const QuantileTable q = quantiles(fc, probs, s);
    CHECK(q.values.size() == 3 * probs.size());
    for (std::size_t h = 0; h < 3; ++h) {
      for (std::size_t k = 1; k < probs.size(); ++k) CHECK(q.at(h, 0, k - 1) <= q.at(h, 0, k));
      if (s == Series::observed) {
        for (std::size_t k = 0; k < probs.size(); ++k) CHECK(q.at(h, 0, k) >= 0.125);
      }
    }
  }
  const QuantileTable shadow = quantiles(fc, {0.1}, Series::shadow);
  CHECK(shadow.at(2, 0, 0) < 0.125);

  CHECK_THROWS_AS(quantiles(fc, {}), ValidationError);
  CHECK_THROWS_AS(quantiles(fc, {1.0}), ValidationError);
  CHECK_THROWS_AS(forecast(m, {0}, 10, rng), ValidationError);
  CHECK_THROWS_AS(forecast(m, {}, 10, rng), ValidationError);
  CHECK_THROWS_AS(forecast(m, {1}, 0, rng), ValidationError);
  m.draws.clear();
  CHECK_THROWS_AS(forecast(m, {1}, 10, rng), ValidationError);
}

TEST_CASE("draws are cycled and explosive ones can be skipped") {
  PredictiveModel m = ar1_model(0.0, 0.5, 1.0, 0.0);
  m.draws.push_back(m.draws[0]);
  m.draws.push_back(m.draws[0]);
  m.draws[1].B(1, 0) = 1.2;
  srvar::Rng rng(65);
  const ForecastResult all = forecast(m, {1}, 7, rng);
  for (std::size_t d = 0; d < 7; ++d) CHECK(all.draw_index[d] == d % 3);

  ForecastOptions reject;
  reject.reject_explosive = true;
  const ForecastResult stable = forecast(m, {1}, 6, rng, reject);
  CHECK(stable.draw_index == std::vector<std::size_t>{0, 2, 0, 2, 0, 2});

  for (auto& d : m.draws) d.B(1, 0) = 1.0;
  CHECK_THROWS_AS(forecast(m, {1}, 3, rng, reject), NumericalError);
}

TEST_CASE("spectral radius") {
  CHECK(spectral_radius(Eigen::Vector2d(5.0, -0.6), 1, true) == doctest::Approx(0.6));
  // y_t = 1.1 y_{t-1} - 0.3 y_{t-2}: roots 0.6 and 0.5
  CHECK(spectral_radius(Eigen::Vector2d(1.1, -0.3), 2, false) == doctest::Approx(0.6));
}

TEST_CASE("stochastic volatility shocks use the propagated log variance") {
  PredictiveModel m;
  m.variables = {"y"};
  m.p = 1;
  PredictiveDraw d;
  d.B = Eigen::Vector2d(0.0, 0.0);
  d.h_last = Eigen::VectorXd::Constant(1, std::log(4.0));
  d.sigma2_eta = Eigen::VectorXd::Constant(1, 0.1);
  d.initial_lags = Eigen::MatrixXd::Zero(1, 1);
  m.draws.push_back(d);
  srvar::Rng rng(66);
  const int D = 40000;
  const ForecastResult fc = forecast(m, {1, 5}, D, rng);
  // var of exp(h/2) z with h ~ N(log 4, k * 0.1) is 4 exp(k * 0.1 / 2)
  for (int k : {1, 5}) {
    double ss = 0.0;
    for (const auto& path : fc.shadow) ss += path(k - 1, 0) * path(k - 1, 0);
    CHECK(ss / D == doctest::Approx(4.0 * std::exp(0.05 * k)).epsilon(0.05));
  }
}

TEST_CASE("forecasts from a fitted model") {
  const DemoSample demo = simulate_demo(120, 8);
  const ModelSpec model = ModelSpec(2).with_elb(ElbSpec({"rate"}, kDemoBound)).with_volatility(VolatilitySpec());
  srvar::Rng rng(67);
  const PosteriorResult r =
      fit(demo.data, model, minnesota_prior(2, demo.data, MinnesotaHyper(1.0, 1.0), true), SamplerConfig(300, 100, 2), rng);
  const PredictiveModel pm = predictive_model(r);
  REQUIRE(pm.draws.size() == r.draws.size());
  CHECK(pm.elb_columns == std::vector<Index>{0});
  CHECK(pm.bound == kDemoBound);
  for (std::size_t i = 0; i < pm.draws.size(); ++i) {
    CHECK(pm.draws[i].initial_lags == r.draws[i].shadow->bottomRows(2));
    CHECK(*pm.draws[i].h_last == r.draws[i].h->row(r.draws[i].h->rows() - 1).transpose());
    CHECK_FALSE(pm.draws[i].sigma.has_value());
  }

  srvar::Rng a(3), b(3);
  const ForecastResult fa = forecast(r, {1, 4, 8}, 500, a);
  const ForecastResult fb = forecast(r, {1, 4, 8}, 500, b);
  for (std::size_t d = 0; d < 500; ++d) {
    CHECK(fa.shadow[d] == fb.shadow[d]);
    CHECK(fa.observed[d].col(0).minCoeff() >= kDemoBound);
    CHECK(fa.observed[d].col(1) == fa.shadow[d].col(1));
  }
}
