#include "srvar/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "srvar/errors.hpp"
#include "srvar/random.hpp"

namespace srvar {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string month_start(int year, int month) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-01", year, month);
  return buf;
}

}  // namespace

Dataset Dataset::from_arrays(Eigen::MatrixXd values, std::vector<std::string> variables,
                             std::optional<std::vector<std::string>> time_index) {
  if (values.rows() < 1 || values.cols() < 1) {
    throw ValidationError("dataset needs at least one row and one column");
  }
  if (static_cast<Index>(variables.size()) != values.cols()) {
    throw ValidationError("dataset has " + std::to_string(values.cols()) + " columns but " +
                          std::to_string(variables.size()) + " variable names");
  }
  std::set<std::string> seen;
  for (const auto& name : variables) {
    if (name.empty()) throw ValidationError("empty variable name");
    if (!seen.insert(name).second) throw ValidationError("duplicate variable name '" + name + "'");
  }
  for (Index j = 0; j < values.cols(); ++j) {
    for (Index t = 0; t < values.rows(); ++t) {
      if (!std::isfinite(values(t, j))) {
        throw ValidationError("non-finite value at row " + std::to_string(t) + ", variable '" +
                              variables[static_cast<std::size_t>(j)] + "'");
      }
    }
  }
  if (time_index) {
    if (static_cast<Index>(time_index->size()) != values.rows()) {
      throw ValidationError("time index length does not match the number of rows");
    }
    for (std::size_t t = 0; t < time_index->size(); ++t) {
      if (!is_iso_date((*time_index)[t])) {
        throw ValidationError("time index entry '" + (*time_index)[t] + "' is not a YYYY-MM-DD date");
      }
      // Fixed-width ISO dates order lexicographically.
      if (t > 0 && (*time_index)[t] <= (*time_index)[t - 1]) {
        throw ValidationError("time index is not strictly increasing at row " + std::to_string(t));
      }
    }
  }
  Dataset ds;
  ds.values_ = std::move(values);
  ds.variables_ = std::move(variables);
  ds.time_index_ = std::move(time_index);
  return ds;
}

std::optional<Index> Dataset::column(std::string_view name) const {
  const auto it = std::find(variables_.begin(), variables_.end(), name);
  if (it == variables_.end()) return std::nullopt;
  return static_cast<Index>(it - variables_.begin());
}

Index Dataset::require_column(std::string_view name) const {
  if (auto j = column(name)) return *j;
  throw ValidationError("unknown variable '" + std::string(name) + "'");
}

std::string Dataset::time_label(Index t) const {
  if (time_index_) return (*time_index_)[static_cast<std::size_t>(t)];
  return std::to_string(t);
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.values_.rows() == b.values_.rows() && a.values_.cols() == b.values_.cols() &&
         a.values_ == b.values_ && a.variables_ == b.variables_ && a.time_index_ == b.time_index_;
}

bool is_iso_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
  int y = 0;
  unsigned m = 0, d = 0;
  auto parse = [&](std::size_t from, std::size_t len, auto& out) {
    const char* first = text.data() + from;
    auto [ptr, ec] = std::from_chars(first, first + len, out);
    return ec == std::errc() && ptr == first + len;
  };
  if (!parse(0, 4, y) || !parse(5, 2, m) || !parse(8, 2, d)) return false;
  return std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}}.ok();
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) throw ValidationError("'" + path.string() + "' is empty");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  std::vector<std::string> header = split_fields(line);
  for (auto& h : header) h = trim(h);

  const bool dated = !header.empty() && header.front() == "date";
  const std::size_t first_var = dated ? 1 : 0;
  if (header.size() <= first_var) throw ValidationError("'" + path.string() + "' has no variable columns");
  std::vector<std::string> variables(header.begin() + static_cast<std::ptrdiff_t>(first_var), header.end());

  std::vector<std::vector<double>> rows;
  std::vector<std::string> dates;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ValidationError("line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                            " fields, expected " + std::to_string(header.size()));
    }
    if (dated) dates.push_back(trim(fields[0]));
    std::vector<double> row;
    row.reserve(variables.size());
    for (std::size_t c = first_var; c < fields.size(); ++c) {
      const std::string cell = trim(fields[c]);
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ValidationError("line " + std::to_string(line_no) + ", column '" + header[c] +
                              "': cannot parse '" + cell + "' as a number");
      }
      row.push_back(value);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError("'" + path.string() + "' has no data rows");

  Eigen::MatrixXd values(static_cast<Index>(rows.size()), static_cast<Index>(variables.size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t j = 0; j < variables.size(); ++j) {
      values(static_cast<Index>(t), static_cast<Index>(j)) = rows[t][j];
    }
  }
  std::optional<std::vector<std::string>> index;
  if (dated) index = std::move(dates);
  return Dataset::from_arrays(std::move(values), std::move(variables), std::move(index));
}

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  const bool dated = ds.time_index().has_value();
  if (dated) out << "date";
  for (std::size_t j = 0; j < ds.variables().size(); ++j) {
    if (dated || j > 0) out << ',';
    out << ds.variables()[j];
  }
  out << '\n';
  for (Index t = 0; t < ds.T(); ++t) {
    if (dated) out << (*ds.time_index())[static_cast<std::size_t>(t)];
    for (Index j = 0; j < ds.N(); ++j) {
      if (dated || j > 0) out << ',';
      out << format_real(ds.values()(t, j));
    }
    out << '\n';
  }
}

Transform parse_transform(std::string_view name) {
  if (name == "level") return Transform::level;
  if (name == "log") return Transform::log;
  if (name == "diff") return Transform::diff;
  throw ValidationError("unknown transform '" + std::string(name) + "'");
}

Dataset transform(const Dataset& ds, Transform op, std::string_view variable) {
  const Index j = ds.require_column(variable);
  switch (op) {
    case Transform::level:
      return ds;
    case Transform::log: {
      Eigen::MatrixXd values = ds.values();
      for (Index t = 0; t < ds.T(); ++t) {
        if (values(t, j) <= 0.0) {
          throw ValidationError("log of non-positive value " + format_real(values(t, j)) + " in '" +
                                std::string(variable) + "' at row " + std::to_string(t));
        }
        values(t, j) = std::log(values(t, j));
      }
      return Dataset::from_arrays(std::move(values), ds.variables(), ds.time_index());
    }
    case Transform::diff: {
      if (ds.T() < 2) throw ValidationError("diff needs at least two rows");
      Eigen::MatrixXd values = ds.values().bottomRows(ds.T() - 1);
      values.col(j) = ds.values().col(j).tail(ds.T() - 1) - ds.values().col(j).head(ds.T() - 1);
      std::optional<std::vector<std::string>> index;
      if (ds.time_index()) index.emplace(ds.time_index()->begin() + 1, ds.time_index()->end());
      return Dataset::from_arrays(std::move(values), ds.variables(), std::move(index));
    }
  }
  throw ValidationError("unknown transform");
}

namespace {

// Demo VAR(2), columns [rate, macro]; rows [const, rate.l1, macro.l1, rate.l2, macro.l2].
Eigen::MatrixXd demo_coefficients(double rate_intercept) {
  Eigen::MatrixXd B(5, 2);
  B << rate_intercept, 0.30,
       1.25, -1.00,
       0.00, 0.50,
       -0.32, 0.60,
       0.00, 0.10;
  return B;
}

constexpr double kDemoRateIntercept = 0.03;
constexpr double kDemoShockSd[2] = {0.25, 0.15};
constexpr double kDemoLogVolSd = 0.04;
constexpr int kDemoBurn = 100;
constexpr double kDemoMinAtBound = 0.20;
constexpr int kDemoMaxAttempts = 50;

}  // namespace

DemoSample simulate_demo(int T, std::uint64_t seed) {
  if (T < 50) throw ValidationError("simulate_demo needs T >= 50, got " + std::to_string(T));

  const Index total = T + kDemoBurn;
  // Shocks are drawn once so that retries only shift the intercept.
  Rng rng(seed);
  Eigen::MatrixXd eta(total, 2), xi(total, 2);
  for (Index t = 0; t < total; ++t) {
    for (Index j = 0; j < 2; ++j) {
      xi(t, j) = rng.normal();
      eta(t, j) = rng.normal();
    }
  }

  for (int attempt = 0; attempt < kDemoMaxAttempts; ++attempt) {
    const double intercept = kDemoRateIntercept - 0.02 * attempt;
    const Eigen::MatrixXd B = demo_coefficients(intercept);
    const Eigen::Matrix2d A1 = B.block(1, 0, 2, 2).transpose();
    const Eigen::Matrix2d A2 = B.block(3, 0, 2, 2).transpose();
    const Eigen::Vector2d c = B.row(0).transpose();
    const Eigen::Vector2d mu = (Eigen::Matrix2d::Identity() - A1 - A2).partialPivLu().solve(c);

    Eigen::MatrixXd y(total, 2), h(total, 2);
    Eigen::Vector2d logvol(std::log(kDemoShockSd[0] * kDemoShockSd[0]),
                           std::log(kDemoShockSd[1] * kDemoShockSd[1]));
    y.row(0) = mu.transpose();
    y.row(1) = mu.transpose();
    h.row(0) = h.row(1) = logvol.transpose();
    for (Index t = 2; t < total; ++t) {
      logvol += kDemoLogVolSd * xi.row(t).transpose();
      h.row(t) = logvol.transpose();
      const Eigen::Vector2d shock = (0.5 * logvol.array()).exp() * eta.row(t).transpose().array();
      y.row(t) = (c + A1 * y.row(t - 1).transpose() + A2 * y.row(t - 2).transpose() + shock).transpose();
    }

    Eigen::MatrixXd latent = y.bottomRows(T);
    Eigen::MatrixXd observed = latent;
    Index at_bound = 0;
    for (Index t = 0; t < T; ++t) {
      observed(t, 0) = std::max(latent(t, 0), kDemoBound);
      if (observed(t, 0) == kDemoBound) ++at_bound;
    }
    if (static_cast<double>(at_bound) < kDemoMinAtBound * static_cast<double>(T)) continue;

    std::vector<std::string> dates;
    dates.reserve(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) dates.push_back(month_start(2000 + t / 12, 1 + t % 12));

    DemoTruth truth;
    truth.shadow = latent.col(0);
    truth.coefficients = B;
    truth.log_volatility = h.bottomRows(T);
    truth.rate_intercept = intercept;
    truth.attempts = attempt + 1;
    return {Dataset::from_arrays(std::move(observed), {"rate", "macro"}, std::move(dates)), std::move(truth)};
  }
  throw NumericalError("simulate_demo could not reach the at-bound share after retries");
}

}  // namespace srvar
