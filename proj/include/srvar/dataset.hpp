#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace srvar {

using Index = Eigen::Index;

/**
 * A T x N panel of finite observations with unique variable names and an
 * optional, strictly increasing ISO-8601 (YYYY-MM-DD) date index.
 *
 * Immutable once built; the only way in is from_arrays(), which validates.
 * The date index is carried along for output and never used in estimation.
 */
class Dataset {
 public:
  static Dataset from_arrays(Eigen::MatrixXd values, std::vector<std::string> variables,
                             std::optional<std::vector<std::string>> time_index = std::nullopt);

  const Eigen::MatrixXd& values() const { return values_; }
  Index T() const { return values_.rows(); }
  Index N() const { return values_.cols(); }
  const std::vector<std::string>& variables() const { return variables_; }
  const std::optional<std::vector<std::string>>& time_index() const { return time_index_; }

  std::optional<Index> column(std::string_view name) const;
  /// Throws ValidationError naming the variable when absent.
  Index require_column(std::string_view name) const;

  /// Label for row t: the date when indexed, otherwise the 0-based row number.
  std::string time_label(Index t) const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  Dataset() = default;

  Eigen::MatrixXd values_;
  std::vector<std::string> variables_;
  std::optional<std::vector<std::string>> time_index_;
};

/// True when `text` is a valid calendar date written as YYYY-MM-DD.
bool is_iso_date(std::string_view text);

/// Reads a comma-separated file with a header row. A leading `date` column
/// becomes the time index; every other column is a variable.
Dataset load_csv(const std::filesystem::path& path);

/// Writes the dataset in the format load_csv() reads, 17 significant digits.
void write_csv(const Dataset& ds, const std::filesystem::path& path);

/// Shortest-safe decimal form used by every emitted CSV: %.17g.
std::string format_real(double value);

enum class Transform { level, log, diff };

Transform parse_transform(std::string_view name);

/// Applies `op` to one column. `diff` drops the first row of every column.
Dataset transform(const Dataset& ds, Transform op, std::string_view variable);

inline constexpr double kDemoBound = 0.125;

struct DemoTruth {
  Eigen::VectorXd shadow;          // latent rate, length T
  Eigen::MatrixXd coefficients;    // 5 x 2, rows [const, rate.l1, macro.l1, rate.l2, macro.l2]
  Eigen::MatrixXd log_volatility;  // T x 2
  double rate_intercept = 0.0;     // after any retries
  int attempts = 1;
};

struct DemoSample {
  Dataset data;
  DemoTruth truth;
};

/**
 * Two-variable monthly VAR(2) over ["rate", "macro"] with a censored policy
 * rate. The latent rate is persistent with a low mean; the macro variable
 * responds to lagged rates. Shocks carry mild random-walk log-volatility.
 * Observed rate is max(shadow, 0.125). If fewer than 20% of periods sit at
 * the bound, the rate intercept is lowered by 0.02 and the same shocks are
 * replayed.
 */
DemoSample simulate_demo(int T, std::uint64_t seed);

}  // namespace srvar
