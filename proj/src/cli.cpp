#include "srvar/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "srvar/dataset.hpp"
#include "srvar/errors.hpp"
#include "srvar/gibbs.hpp"
#include "srvar/svg.hpp"

namespace srvar::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<double> kProbs = {0.10, 0.50, 0.90};
constexpr const char* kDrawsFile = "posterior_draws.json";

const json* find(const json& root, const std::string& dotted) {
  const json* node = &root;
  std::istringstream parts(dotted);
  std::string part;
  while (std::getline(parts, part, '.')) {
    if (!node->is_object()) return nullptr;
    auto it = node->find(part);
    if (it == node->end()) return nullptr;
    node = &*it;
  }
  return node;
}

template <typename T>
T get(const json& root, const std::string& key) {
  const json* node = find(root, key);
  if (!node || node->is_null()) throw ValidationError("config is missing required key '" + key + "'");
  try {
    return node->get<T>();
  } catch (const json::exception&) {
    throw ValidationError("config key '" + key + "' has the wrong type");
  }
}

template <typename T>
T get_or(const json& root, const std::string& key, T fallback) {
  const json* node = find(root, key);
  if (!node || node->is_null()) return fallback;
  return get<T>(root, key);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << text;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
  const auto r = static_cast<Index>(rows.size());
  const auto c = r ? static_cast<Index>(rows.at(0).size()) : 0;
  Eigen::MatrixXd m(r, c);
  for (Index i = 0; i < r; ++i) {
    if (static_cast<Index>(rows.at(i).size()) != c) throw ValidationError("ragged matrix in posterior draws");
    for (Index j = 0; j < c; ++j) m(i, j) = rows.at(i).at(j).get<double>();
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from_json(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Index>(values.size()));
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    body();
    return kOk;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

struct FitOutcome {
  RunConfig config;
  Dataset data;
  PosteriorResult result;
};

void write_fit_outputs(const FitOutcome& run) {
  const fs::path& dir = run.config.output_dir;
  const PosteriorResult& result = run.result;
  const Dataset& ds = run.data;

  {
    std::ostringstream csv;
    csv << "regressor,equation,mean,sd\n";
    for (const auto& row : posterior_summary(result, Quantity::coefficients, {}).rows) {
      csv << row.row_label << ',' << row.column_label << ',' << format_real(row.mean) << ',' << format_real(row.sd)
          << '\n';
    }
    write_text(dir / "coefficients_summary.csv", csv.str());
  }

  if (result.model.elb()) {
    const SummaryTable shadow = posterior_summary(result, Quantity::shadow, kProbs);
    std::ostringstream csv;
    csv << "variable,time,observed,shadow_q10,shadow_q50,shadow_q90\n";
    for (const auto& row : shadow.rows) {
      csv << row.column_label << ',' << row.row_label << ',' << format_real(ds.values()(row.row, row.col));
      for (double q : row.quantiles) csv << ',' << format_real(q);
      csv << '\n';
    }
    write_text(dir / "shadow_median.csv", csv.str());

    for (const auto& name : result.model.elb()->applies_to()) {
      svg::ShadowPlot plot;
      plot.title = "Shadow rate: " + name;
      plot.bound = result.model.elb()->bound();
      const Index j = ds.require_column(name);
      for (const auto& row : shadow.rows) {
        if (row.col != j) continue;
        plot.observed.push_back(ds.values()(row.row, j));
        plot.shadow.push_back(row.quantiles[1]);
      }
      write_text(dir / ("shadowplot_" + name + ".svg"), svg::render_shadow_plot(plot));
    }
  }

  if (result.model.sv_enabled()) {
    const SummaryTable vol = posterior_summary(result, Quantity::volatility, {});
    const Index T_eff = ds.T() - result.model.p();
    std::ostringstream csv;
    csv << "time";
    for (const auto& v : ds.variables()) csv << ',' << v;
    csv << '\n';
    // Rows are column-major over (t, variable).
    for (Index t = 0; t < T_eff; ++t) {
      csv << ds.time_label(t + result.model.p());
      for (Index j = 0; j < ds.N(); ++j) csv << ',' << format_real(vol.rows[static_cast<std::size_t>(j * T_eff + t)].mean);
      csv << '\n';
    }
    write_text(dir / "volatility_mean.csv", csv.str());
  }

  if (result.model.ssvs()) {
    std::ostringstream csv;
    csv << "regressor,inclusion_frequency\n";
    for (const auto& row : posterior_summary(result, Quantity::inclusion, {}).rows) {
      csv << row.row_label << ',' << format_real(row.mean) << '\n';
    }
    write_text(dir / "inclusion.csv", csv.str());
  }

  save_predictive_model(predictive_model(result), dir / kDrawsFile);

  json meta;
  meta["seed"] = run.config.sampler.seed();
  meta["iterations"] = run.config.sampler.draws();
  meta["retained_draws"] = result.draws.size();
  meta["shadow_updates"] = result.diagnostics.shadow_updates;
  meta["mixture_underflow_fallbacks"] = result.diagnostics.mixture_underflow_fallbacks;
  meta["config"] = json::parse(run.config.echo);
  write_text(dir / "result.meta", meta.dump(2) + "\n");
}

FitOutcome run_fit(const fs::path& config_path) {
  RunConfig config = load_config(config_path);
  Dataset ds = load_csv(config.data_path);
  validate(config.model, ds);
  const NiwPrior prior = minnesota_prior(config.model.p(), ds, config.hyper, config.model.include_intercept());
  Rng rng(config.sampler.seed());
  PosteriorResult result = fit(ds, config.model, prior, config.sampler, rng);
  fs::create_directories(config.output_dir);
  FitOutcome outcome{std::move(config), std::move(ds), std::move(result)};
  write_fit_outputs(outcome);
  return outcome;
}

}  // namespace

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config '" + path.string() + "'");
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

  ModelSpec model(get<int>(root, "model.p"), get_or<bool>(root, "model.include_intercept", true));
  if (find(root, "model.elb")) {
    model = model.with_elb(ElbSpec(get<std::vector<std::string>>(root, "model.elb.applies_to"),
                                   get<double>(root, "model.elb.bound"),
                                   get_or<double>(root, "model.elb.censor_tolerance", 1e-6)));
  }
  if (find(root, "model.volatility")) {
    model = model.with_volatility(VolatilitySpec(get<bool>(root, "model.volatility.enabled"),
                                                 get_or<double>(root, "model.volatility.innovation_prior_shape", 3.0),
                                                 get_or<double>(root, "model.volatility.innovation_prior_scale", 0.01),
                                                 get_or<double>(root, "model.volatility.initial_logvol_variance", 10.0),
                                                 get_or<double>(root, "model.volatility.log_offset", 1e-4)));
  }
  if (find(root, "model.ssvs")) {
    model = model.with_ssvs(SsvsSpec(get_or<double>(root, "model.ssvs.spike_multiplier", 0.01),
                                     get_or<double>(root, "model.ssvs.slab_multiplier", 10.0),
                                     get_or<double>(root, "model.ssvs.prior_inclusion", 0.5),
                                     get_or<bool>(root, "model.ssvs.force_intercept", true)));
  }

  MinnesotaHyper hyper(get<double>(root, "prior.lambda1"), get<double>(root, "prior.lambda3"));
  SamplerConfig sampler(get<int>(root, "sampler.draws"), get_or<int>(root, "sampler.burn_in", 0),
                        get_or<int>(root, "sampler.thin", 1), get<std::uint64_t>(root, "sampler.seed"));

  const auto data_path = resolve(get<std::string>(root, "data.path"));
  auto horizons = get_or<std::vector<int>>(root, "forecast.horizons", {1, 4, 8});
  const int forecast_draws = get_or<int>(root, "forecast.draws", 500);
  const auto output_dir = resolve(get<std::string>(root, "output.dir"));
  if (horizons.empty()) throw ValidationError("config key 'forecast.horizons' must not be empty");
  for (int h : horizons) {
    if (h < 1) throw ValidationError("config key 'forecast.horizons' must hold positive integers");
  }
  if (forecast_draws < 1) throw ValidationError("config key 'forecast.draws' must be >= 1");

  return RunConfig{std::move(model), hyper,          sampler,   data_path, std::move(horizons),
                   forecast_draws,   output_dir, root.dump()};
}

void save_predictive_model(const PredictiveModel& model, const fs::path& path) {
  json root;
  root["variables"] = model.variables;
  root["p"] = model.p;
  root["include_intercept"] = model.include_intercept;
  root["elb_columns"] = std::vector<long>(model.elb_columns.begin(), model.elb_columns.end());
  root["bound"] = model.bound;
  json draws = json::array();
  for (const auto& d : model.draws) {
    json jd;
    jd["B"] = matrix_to_json(d.B);
    if (d.sigma) jd["sigma"] = matrix_to_json(*d.sigma);
    if (d.h_last) {
      jd["h_last"] = vector_to_json(*d.h_last);
      jd["sigma2_eta"] = vector_to_json(*d.sigma2_eta);
    }
    jd["initial_lags"] = matrix_to_json(d.initial_lags);
    draws.push_back(std::move(jd));
  }
  root["draws"] = std::move(draws);
  write_text(path, root.dump() + "\n");
}

PredictiveModel load_predictive_model(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("missing fit artifact '" + path.string() + "'; run `srvar fit` first or pass --refit");
  const json root = json::parse(in);
  PredictiveModel model;
  model.variables = root.at("variables").get<std::vector<std::string>>();
  model.p = root.at("p").get<int>();
  model.include_intercept = root.at("include_intercept").get<bool>();
  for (long c : root.at("elb_columns").get<std::vector<long>>()) model.elb_columns.push_back(c);
  model.bound = root.at("bound").get<double>();
  for (const auto& jd : root.at("draws")) {
    PredictiveDraw d;
    d.B = matrix_from_json(jd.at("B"));
    if (jd.contains("sigma")) d.sigma = matrix_from_json(jd.at("sigma"));
    if (jd.contains("h_last")) {
      d.h_last = vector_from_json(jd.at("h_last"));
      d.sigma2_eta = vector_from_json(jd.at("sigma2_eta"));
    }
    d.initial_lags = matrix_from_json(jd.at("initial_lags"));
    model.draws.push_back(std::move(d));
  }
  if (model.draws.empty()) throw ValidationError("posterior draws file holds no draws");
  return model;
}

int cmd_fit(const fs::path& config_path, std::ostream& err) {
  return guarded(err, [&] { run_fit(config_path); });
}

int cmd_forecast(const fs::path& config_path, bool refit, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig config = refit ? run_fit(config_path).config : load_config(config_path);
    const PredictiveModel model = load_predictive_model(config.output_dir / kDrawsFile);

    Rng rng = Rng::substream(config.sampler.seed(), 1);
    const ForecastResult fc = forecast(model, config.horizons, config.forecast_draws, rng);

    std::ostringstream csv;
    csv << "series,horizon,variable,q10,q50,q90\n";
    for (Series series : {Series::shadow, Series::observed}) {
      const QuantileTable table = quantiles(fc, kProbs, series);
      for (std::size_t h = 0; h < table.horizons.size(); ++h) {
        for (std::size_t j = 0; j < table.variables.size(); ++j) {
          csv << (series == Series::shadow ? "shadow" : "observed") << ',' << table.horizons[h] << ','
              << table.variables[j];
          for (std::size_t k = 0; k < table.probs.size(); ++k) csv << ',' << format_real(table.at(h, j, k));
          csv << '\n';
        }
      }
    }
    write_text(config.output_dir / "forecast_quantiles.csv", csv.str());

    // Fan charts use every horizon up to the longest requested one.
    ForecastResult full = fc;
    const int H = *std::max_element(fc.horizons.begin(), fc.horizons.end());
    full.horizons.clear();
    for (int h = 1; h <= H; ++h) full.horizons.push_back(h);
    const QuantileTable bands = quantiles(full, kProbs, Series::shadow);
    for (Index col : fc.elb_columns) {
      const auto j = static_cast<std::size_t>(col);
      svg::FanChart chart;
      chart.title = "Forecast fan chart: " + fc.variables[j] + " (10/50/90%)";
      for (std::size_t h = 0; h < bands.horizons.size(); ++h) {
        chart.x.push_back(bands.horizons[h]);
        chart.lower.push_back(bands.at(h, j, 0));
        chart.median.push_back(bands.at(h, j, 1));
        chart.upper.push_back(bands.at(h, j, 2));
      }
      write_text(config.output_dir / ("fanchart_" + fc.variables[j] + ".svg"), svg::render_fan_chart(chart));
    }
  });
}

int cmd_simulate(int T, std::uint64_t seed, const fs::path& out, std::ostream& err) {
  return guarded(err, [&] {
    const DemoSample demo = simulate_demo(T, seed);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_csv(demo.data, out);

    const Dataset& ds = demo.data;
    std::ostringstream csv;
    csv << "date,shadow_rate,h_rate,h_macro\n";
    for (Index t = 0; t < ds.T(); ++t) {
      csv << ds.time_label(t) << ',' << format_real(demo.truth.shadow(t)) << ','
          << format_real(demo.truth.log_volatility(t, 0)) << ',' << format_real(demo.truth.log_volatility(t, 1))
          << '\n';
    }
    write_text(out.parent_path() / ("truth_" + out.filename().string()), csv.str());
  });
}

}  // namespace srvar::cli
