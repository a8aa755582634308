#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>

#include "srvar/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Bayesian VAR with shadow-rate augmentation, stochastic volatility and SSVS"};
  app.require_subcommand(1);

  std::string config;
  bool refit = false;
  int T = 0;
  std::uint64_t seed = 0;
  std::string out;

  auto* fit = app.add_subcommand("fit", "Run the Gibbs sampler and write posterior summaries");
  fit->add_option("--config", config, "JSON configuration file")->required();

  auto* fc = app.add_subcommand("forecast", "Write forecast quantiles and fan charts");
  fc->add_option("--config", config, "JSON configuration file")->required();
  fc->add_flag("--refit", refit, "Fit first instead of reading stored draws");

  auto* sim = app.add_subcommand("simulate", "Write the censored two-variable demo dataset");
  sim->add_option("--T", T, "Number of periods (>= 50)")->required();
  sim->add_option("--seed", seed, "Random seed")->required();
  sim->add_option("--out", out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : srvar::cli::kValidationFailure;
  }

  if (*fit) return srvar::cli::cmd_fit(config, std::cerr);
  if (*fc) return srvar::cli::cmd_forecast(config, refit, std::cerr);
  return srvar::cli::cmd_simulate(T, seed, out, std::cerr);
}
