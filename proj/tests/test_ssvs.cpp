#include <doctest.h>

#include <cmath>

#include "srvar/gibbs.hpp"
#include "srvar/ssvs.hpp"
#include "support.hpp"

using namespace srvar;

namespace {

double log_normal(double x, double var) { return -0.5 * std::log(2 * M_PI * var) - 0.5 * x * x / var; }

}  // namespace

TEST_CASE("effective row variance") {
  const SsvsSpec spec;
  CHECK(effective_row_variance(true, 0.04, spec) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(effective_row_variance(false, 0.04, spec) == doctest::Approx(4e-6).epsilon(1e-14));
  const SsvsSpec close(0.999999, 1.0);
  CHECK(effective_row_variance(true, 2.0, close) == doctest::Approx(effective_row_variance(false, 2.0, close)).epsilon(1e-5));

  InclusionState s;
  s.gamma = Eigen::Vector3i(1, 0, 1);
  s.baseline_v = Eigen::Vector3d(1.0, 2.0, 3.0);
  const Eigen::VectorXd v = s.row_variances(spec);
  CHECK(v(0) == doctest::Approx(100.0));
  CHECK(v(1) == doctest::Approx(2e-4));
  CHECK(v(2) == doctest::Approx(300.0));
}

TEST_CASE("scalar inclusion probability at the mode") {
  for (double pi : {0.1, 0.5, 0.9}) {
    const SsvsSpec spec(0.01, 10.0, pi);
    const double got = inclusion_probability(Eigen::RowVectorXd::Zero(1), Eigen::RowVectorXd::Zero(1), 0.3,
                                              Eigen::VectorXd::Ones(1), spec);
    const double want = pi * (1 / 10.0) / (pi * (1 / 10.0) + (1 - pi) * (1 / 0.01));
    CHECK(std::abs(got - want) < 1e-12);
  }
}

TEST_CASE("inclusion probability against direct densities") {
  srvar::Rng rng(41);
  const SsvsSpec spec(0.05, 5.0, 0.3);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::RowVectorXd b = 0.1 * testing::random_matrix(1, 3, rng), m = 0.1 * testing::random_matrix(1, 3, rng);
    const Eigen::VectorXd sd = Eigen::Vector3d(0.5, 1.0, 2.0);
    const double v = 0.2;
    double slab = std::log(0.3), spike = std::log(0.7);
    for (Index j = 0; j < 3; ++j) {
      slab += log_normal(b(j) - m(j), 25.0 * v * sd(j));
      spike += log_normal(b(j) - m(j), 0.0025 * v * sd(j));
    }
    const double want = 1.0 / (1.0 + std::exp(spike - slab));
    CHECK(std::abs(inclusion_probability(b, m, v, sd, spec) - want) < 1e-12);
  }
}

TEST_CASE("slab tail coefficient is included") {
  const SsvsSpec spec;
  const double v = 0.04;
  const Eigen::RowVectorXd b = Eigen::RowVectorXd::Constant(1, 10.0 * 10.0 * std::sqrt(v));
  CHECK(inclusion_probability(b, Eigen::RowVectorXd::Zero(1), v, Eigen::VectorXd::Ones(1), spec) > 0.999);
}

TEST_CASE("prior near one includes everything") {
  const SsvsSpec spec(0.01, 10.0, 1.0 - 1e-12, false);
  srvar::Rng rng(42);
  const Eigen::MatrixXd B = Eigen::MatrixXd::Zero(5, 2);
  CHECK(inclusion_probability(B.row(1), B.row(1), 1.0, Eigen::VectorXd::Ones(2), spec) >= 1 - 1e-6);
  int included = 0;
  for (int i = 0; i < 2000; ++i) {
    included += sample_inclusion(B, B, Eigen::VectorXd::Ones(5), Eigen::VectorXd::Ones(2), spec, true, rng).gamma.sum();
  }
  CHECK(included == 2000 * 5);
}

TEST_CASE("forced intercept stays in") {
  const SsvsSpec spec(0.01, 10.0, 0.01, true);
  srvar::Rng rng(43);
  const Eigen::MatrixXd B = Eigen::MatrixXd::Zero(4, 2);
  for (int i = 0; i < 200; ++i) {
    const InclusionState s = sample_inclusion(B, B, Eigen::VectorXd::Ones(4), Eigen::VectorXd::Ones(2), spec, true, rng);
    CHECK(s.gamma(0) == 1);
  }
  // without an intercept row, row 0 is an ordinary predictor
  int row0 = 0;
  for (int i = 0; i < 200; ++i) {
    row0 += sample_inclusion(B, B, Eigen::VectorXd::Ones(4), Eigen::VectorXd::Ones(2), spec, false, rng).gamma(0);
  }
  CHECK(row0 < 200);
  srvar::Rng a(1), b(1);
  CHECK(sample_inclusion(B, B, Eigen::VectorXd::Ones(4), Eigen::VectorXd::Ones(2), SsvsSpec(), true, a).gamma ==
        sample_inclusion(B, B, Eigen::VectorXd::Ones(4), Eigen::VectorXd::Ones(2), SsvsSpec(), true, b).gamma);
}

TEST_CASE("empirical inclusion rate follows the probability") {
  const SsvsSpec spec(0.1, 3.0, 0.5, false);
  srvar::Rng rng(44);
  Eigen::MatrixXd B(1, 2), M = Eigen::MatrixXd::Zero(1, 2);
  B << 0.05, -0.03;
  const Eigen::VectorXd sd = Eigen::Vector2d(0.2, 0.3);
  const double prob = inclusion_probability(B.row(0), M.row(0), 0.1, sd, spec);
  const int n = 50000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += sample_inclusion(B, M, Eigen::VectorXd::Constant(1, 0.1), sd, spec, false, rng).gamma(0);
  CHECK(std::abs(static_cast<double>(hits) / n - prob) < 4 * std::sqrt(prob * (1 - prob) / n));
}

TEST_CASE("sparse VAR separates zero and nonzero rows") {
  srvar::Rng rng(45);
  // rows: const, y1.l1, y2.l1, y1.l2, y2.l2; the two lag-2 rows are zero
  Eigen::MatrixXd B(5, 2);
  B << 0.1, -0.1, 0.5, 0.3, -0.4, 0.45, 0.0, 0.0, 0.0, 0.0;
  const Eigen::MatrixXd y = testing::simulate_var(B, 0.25 * Eigen::Matrix2d::Identity(), 2, 400, rng);
  const Dataset ds = Dataset::from_arrays(y, {"y1", "y2"});
  const ModelSpec model = ModelSpec(2).with_ssvs(SsvsSpec());
  const NiwPrior prior = minnesota_prior(2, ds, MinnesotaHyper(1.0, 1.0, 0.0), true);
  const PosteriorResult r = fit(ds, model, prior, SamplerConfig(2000, 500, 1), rng);
  const SummaryTable incl = posterior_summary(r, Quantity::inclusion);
  REQUIRE(incl.rows.size() == 5);
  for (const auto& row : incl.rows) {
    CHECK(row.mean >= 0.0);
    CHECK(row.mean <= 1.0);
  }
  CHECK(incl.rows[0].mean == 1.0);
  const double nonzero = (incl.rows[1].mean + incl.rows[2].mean) / 2;
  const double zero = (incl.rows[3].mean + incl.rows[4].mean) / 2;
  CHECK(nonzero - zero >= 0.2);
}
