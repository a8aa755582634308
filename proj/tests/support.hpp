#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "srvar/random.hpp"

namespace testing {

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("srvar_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

inline std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

inline double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Kolmogorov-Smirnov statistic of `xs` against `cdf`.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

/// Asymptotic 1% critical value for the one-sample KS test.
inline double ks_critical_1pct(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, srvar::Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

/// Symmetric positive definite with eigenvalues bounded away from zero.
inline Eigen::MatrixXd random_spd(Eigen::Index n, srvar::Rng& rng, double ridge = 0.5) {
  Eigen::MatrixXd a = random_matrix(n, n, rng);
  return a * a.transpose() / static_cast<double>(n) + ridge * Eigen::MatrixXd::Identity(n, n);
}

inline double max_rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

/// Simulates y_t = c + sum_l A_l y_{t-l} + e_t, e_t ~ N(0, Sigma), after `burn` periods.
inline Eigen::MatrixXd simulate_var(const Eigen::MatrixXd& B, const Eigen::MatrixXd& sigma, int p, int T,
                                    srvar::Rng& rng, int burn = 200) {
  const Eigen::Index N = B.cols();
  const Eigen::MatrixXd L = sigma.llt().matrixL();
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(T + burn + p, N);
  for (Eigen::Index t = p; t < y.rows(); ++t) {
    Eigen::VectorXd z(N);
    for (Eigen::Index i = 0; i < N; ++i) z(i) = rng.normal();
    Eigen::VectorXd v = B.row(0).transpose() + L * z;
    for (int l = 1; l <= p; ++l) v += B.middleRows(1 + (l - 1) * N, N).transpose() * y.row(t - l).transpose();
    y.row(t) = v.transpose();
  }
  return y.bottomRows(T);
}

}  // namespace testing
