#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "srvar/errors.hpp"
#include "srvar/sv.hpp"
#include "support.hpp"

using namespace srvar;

namespace {

// Moments of log(chi^2_1) by trapezoid quadrature of its density
// f(x) = exp(x/2 - e^x/2) / sqrt(2 pi).
std::pair<double, double> log_chi2_moments() {
  const double lo = -60.0, hi = 6.0;
  const int n = 400000;
  const double dx = (hi - lo) / n;
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + i * dx;
    const double w = (i == 0 || i == n ? 0.5 : 1.0) * dx * std::exp(0.5 * x - 0.5 * std::exp(x)) / std::sqrt(2 * M_PI);
    m0 += w;
    m1 += w * x;
    m2 += w * x * x;
  }
  const double mean = m1 / m0;
  return {mean, m2 / m0 - mean * mean};
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::ArrayXd x = a.array() - a.mean(), y = b.array() - b.mean();
  return (x * y).sum() / std::sqrt((x * x).sum() * (y * y).sum());
}

}  // namespace

TEST_CASE("mixture table") {
  const MixtureTable& t = ksc_mixture_table();
  CHECK(std::accumulate(t.q.begin(), t.q.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(t.q[0] == 0.00730);
  CHECK(t.q[4] == 0.34001);
  for (double v : t.v2) CHECK(v > 0.0);

  const auto [mean, var] = log_chi2_moments();
  CHECK(mean == doctest::Approx(-1.2704).epsilon(1e-3));
  CHECK(var == doctest::Approx(M_PI * M_PI / 2).epsilon(1e-3));
  double mm = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < 7; ++i) {
    mm += t.q[i] * t.m[i];
    m2 += t.q[i] * (t.v2[i] + t.m[i] * t.m[i]);
  }
  CHECK(std::abs(mm - mean) < 0.05);
  CHECK(std::abs(m2 - mm * mm - var) < 0.1);
}

TEST_CASE("linearize") {
  CHECK(linearize(0.0, 1e-4) == doctest::Approx(-9.2103).epsilon(1e-5));
  CHECK(linearize(1.0, 1e-4) == std::log(1.0001));
  double last = -INFINITY;
  for (double r : {0.0, 0.01, 0.1, 1.0, 10.0}) {
    CHECK(linearize(r, 1e-4) > last);
    CHECK(linearize(-r, 1e-4) == linearize(r, 1e-4));
    last = linearize(r, 1e-4);
  }
}

TEST_CASE("mixture probabilities match direct evaluation") {
  const MixtureTable& t = ksc_mixture_table();
  for (double ystar : {-9.0, -3.0, -1.0, 0.5, 2.0}) {
    for (double h : {-2.0, 0.0, 1.5}) {
      std::array<double, 7> w{};
      double total = 0.0;
      for (std::size_t i = 0; i < 7; ++i) {
        const double d = ystar - h - t.m[i];
        w[i] = t.q[i] * std::exp(-0.5 * d * d / t.v2[i]) / std::sqrt(2 * M_PI * t.v2[i]);
        total += w[i];
      }
      bool underflow = true;
      const auto got = mixture_probabilities(ystar, h, t, &underflow);
      CHECK_FALSE(underflow);
      for (std::size_t i = 0; i < 7; ++i) CHECK(std::abs(got[i] - w[i] / total) < 1e-12);
    }
  }
  // far outliers still resolve in log space
  bool underflow = true;
  const auto far = mixture_probabilities(1e6, 0.0, t, &underflow);
  CHECK_FALSE(underflow);
  CHECK(far[static_cast<std::size_t>(std::max_element(t.v2.begin(), t.v2.end()) - t.v2.begin())] == doctest::Approx(1.0));
  const auto fallback = mixture_probabilities(1e200, 0.0, t, &underflow);
  CHECK(underflow);
  CHECK(fallback == t.q);
}

TEST_CASE("a dominant component is always selected") {
  MixtureTable t = ksc_mixture_table();
  t.m = {10.0, 10.0, 10.0, 0.0, 10.0, 10.0, 10.0};
  t.v2.fill(0.1);
  // log density ratio 0.5 * 100 / 0.1 = 500 >> log(1e30)
  srvar::Rng rng(31);
  const Eigen::VectorXd ystar = Eigen::VectorXd::Zero(10000), h = Eigen::VectorXd::Zero(10000);
  const IndicatorDraw d = sample_mixture_indicators(ystar, h, t, rng);
  CHECK(std::all_of(d.component.begin(), d.component.end(), [](int c) { return c == 3; }));

  srvar::Rng a(5), b(5);
  const Eigen::VectorXd y2 = Eigen::VectorXd::LinSpaced(50, -8, 2);
  CHECK(sample_mixture_indicators(y2, h.head(50), ksc_mixture_table(), a).component ==
        sample_mixture_indicators(y2, h.head(50), ksc_mixture_table(), b).component);
}

TEST_CASE("indicator frequencies follow the posterior probabilities") {
  const MixtureTable& t = ksc_mixture_table();
  srvar::Rng rng(32);
  const int n = 100000;
  const Eigen::VectorXd ystar = Eigen::VectorXd::Constant(n, -1.5), h = Eigen::VectorXd::Constant(n, 0.2);
  const IndicatorDraw d = sample_mixture_indicators(ystar, h, t, rng);
  std::array<double, 7> freq{};
  for (int c : d.component) freq[static_cast<std::size_t>(c)] += 1.0 / n;
  const auto want = mixture_probabilities(-1.5, 0.2, t);
  for (std::size_t i = 0; i < 7; ++i) CHECK(std::abs(freq[i] - want[i]) < 4 * std::sqrt(want[i] / n) + 1e-4);
}

TEST_CASE("scalar log-volatility posterior") {
  const MixtureTable& t = ksc_mixture_table();
  const Eigen::VectorXd ystar = Eigen::VectorXd::Constant(1, -0.7);
  const double h0_mean = 0.3, h0_var = 2.0;
  for (int s = 0; s < 7; ++s) {
    const LogVolatilityPosterior post = log_volatility_posterior(ystar, {s}, 0.05, h0_mean, h0_var, t);
    const double prec = 1.0 / t.v2[s] + 1.0 / h0_var;
    const double mean = ((-0.7 - t.m[s]) / t.v2[s] + h0_mean / h0_var) / prec;
    CHECK(std::abs(post.diagonal(0) - prec) < 1e-12 * prec);
    CHECK(std::abs(post.mean()(0) - mean) < 1e-12);
  }
}

TEST_CASE("banded solve matches a dense solve") {
  const MixtureTable& t = ksc_mixture_table();
  srvar::Rng rng(33);
  const Index n = 50;
  Eigen::VectorXd ystar(n);
  std::vector<int> comp(n);
  for (Index i = 0; i < n; ++i) {
    ystar(i) = -1.3 + 2.0 * rng.normal();
    comp[static_cast<std::size_t>(i)] = static_cast<int>(i % 7);
  }
  const double s2 = 0.07, h0_mean = -0.5, h0_var = 3.0;

  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n - 1, n);
  for (Index i = 0; i + 1 < n; ++i) {
    D(i, i) = -1.0;
    D(i, i + 1) = 1.0;
  }
  Eigen::MatrixXd Q = D.transpose() * D / s2;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (Index i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(comp[static_cast<std::size_t>(i)]);
    Q(i, i) += 1.0 / t.v2[c];
    rhs(i) = (ystar(i) - t.m[c]) / t.v2[c];
  }
  Q(0, 0) += 1.0 / h0_var;
  rhs(0) += h0_mean / h0_var;
  const Eigen::VectorXd dense = Q.llt().solve(rhs);

  const LogVolatilityPosterior post = log_volatility_posterior(ystar, comp, s2, h0_mean, h0_var, t);
  CHECK((post.mean() - dense).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((post.diagonal - Eigen::VectorXd(Q.diagonal())).cwiseAbs().maxCoeff() < 1e-10);

  const TridiagonalCholesky chol(post.diagonal, post.off_diagonal);
  CHECK(chol.stored_elements() == 2 * n - 1);
  CHECK(chol.size() == n);
  const Eigen::MatrixXd L = Q.llt().matrixL();
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(n, -1, 1);
  CHECK((chol.solve_lower(b) - L.triangularView<Eigen::Lower>().solve(b)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((chol.solve_upper(b) - L.transpose().triangularView<Eigen::Upper>().solve(b)).cwiseAbs().maxCoeff() < 1e-10);

  // draws: mean and the variance of one coordinate against Q^{-1}
  const int draws = 20000;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  double v10 = 0.0;
  const Eigen::MatrixXd cov = Q.inverse();
  for (int i = 0; i < draws; ++i) {
    const Eigen::VectorXd d = sample_log_volatility(ystar, comp, s2, h0_mean, h0_var, t, rng) - dense;
    acc += d;
    v10 += d(10) * d(10);
  }
  CHECK(std::abs(acc(10) / draws) < 4 * std::sqrt(cov(10, 10) / draws));
  CHECK(v10 / draws == doctest::Approx(cov(10, 10)).epsilon(0.05));
}

TEST_CASE("tiny innovation variance flattens the path") {
  const Eigen::VectorXd ystar = Eigen::VectorXd::LinSpaced(10, -6, 3);
  const std::vector<int> comp = {0, 1, 2, 3, 4, 5, 6, 4, 4, 3};
  const LogVolatilityPosterior post = log_volatility_posterior(ystar, comp, 1e-8, 0.0, 10.0, ksc_mixture_table());
  const Eigen::VectorXd m = post.mean();
  CHECK(m.maxCoeff() - m.minCoeff() < 1e-3);
}

TEST_CASE("innovation variance") {
  srvar::Rng rng(34);
  const double a = 3.0, b = 0.01;
  const Index n = 40;
  const Eigen::VectorXd flat = Eigen::VectorXd::Constant(n, 0.4);
  const int draws = 100000;
  double sum = 0.0;
  for (int i = 0; i < draws; ++i) sum += sample_innovation_variance(flat, 0.4, a, b, rng);
  CHECK(sum / draws == doctest::Approx(b / (a + n / 2.0 - 1.0)).epsilon(0.03));

  // bigger increments give stochastically larger draws from the same stream
  Eigen::VectorXd rough = flat;
  for (Index i = 0; i < n; i += 2) rough(i) += 0.3;
  srvar::Rng r1(7), r2(7);
  CHECK(sample_innovation_variance(rough, 0.4, a, b, r1) > sample_innovation_variance(flat, 0.4, a, b, r2));
  srvar::Rng r3(8), r4(8);
  CHECK(sample_innovation_variance(rough, 0.4, a, b, r3) == sample_innovation_variance(rough, 0.4, a, b, r4));
}

TEST_CASE("initial log-volatility draw") {
  srvar::Rng rng(35);
  // h0 ~ N(m, v), h1 | h0 ~ N(h0, s2): posterior precision 1/v + 1/s2
  const double h1 = 1.0, s2 = 0.5, m = -1.0, v = 2.0;
  const double prec = 1.0 / v + 1.0 / s2, mean = (m / v + h1 / s2) / prec;
  const int draws = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double x = sample_initial_logvol(h1, s2, m, v, rng);
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / draws - mean) < 4 * std::sqrt(1.0 / prec / draws));
  CHECK(sq / draws - (sum / draws) * (sum / draws) == doctest::Approx(1.0 / prec).epsilon(0.03));
}

TEST_CASE("volatility recovery on a simulated path") {
  srvar::Rng rng(36);
  const Index T = 500;
  Eigen::VectorXd h(T), e(T);
  double level = std::log(0.5);
  for (Index t = 0; t < T; ++t) {
    level += std::sqrt(0.03) * rng.normal();
    h(t) = level;
    e(t) = std::exp(0.5 * h(t)) * rng.normal();
  }
  const VolatilitySpec spec;
  const Eigen::VectorXd prior_level = Eigen::VectorXd::Constant(1, std::log((e.array() * e.array()).mean()));
  VolState state = initial_vol_state(T, prior_level, spec);
  CHECK(state.sigma2_eta(0) == doctest::Approx(0.01 / 4.0));
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(T);
  const int burn = 500, keep = 1500;
  for (int i = 0; i < burn + keep; ++i) {
    state = update_volatility(std::move(state), e, prior_level, spec, rng);
    CHECK_UNARY(state.h.allFinite());
    CHECK(state.sigma2_eta(0) > 0.0);
    if (i >= burn) acc += state.h.col(0);
  }
  for (Index t = 0; t < T; ++t) {
    CHECK(state.component(t, 0) >= 0);
    CHECK(state.component(t, 0) < 7);
  }
  CHECK(pearson(acc / keep, h) >= 0.7);
}
