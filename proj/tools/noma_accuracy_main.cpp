// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "noma/experiments.hpp"

namespace {

struct CliFlags {
  std::string config_path;
  std::string out;
  std::string model;
  std::string select;
  std::string msp_mode;
  std::string direction;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  std::optional<double> alpha;
  std::optional<double> m;
  std::optional<double> theta;
  std::optional<double> beta;
  std::optional<int> n_users;
  std::optional<int> pool_size;
  std::optional<int> workers;
  bool voronoi = false;
};

void add_common_options(CLI::App* cmd, CliFlags& flags) {
  cmd->add_option("--config", flags.config_path, "key=value config file");
  cmd->add_option("--seed", flags.seed, "master RNG seed");
  cmd->add_option("--samples", flags.samples, "Monte Carlo sample count");
  cmd->add_option("--out", flags.out, "output CSV path (default: stdout)");
  cmd->add_option("--model", flags.model, "ppp|mcp|tcp");
  cmd->add_option("--alpha", flags.alpha, "path-loss exponent");
  cmd->add_option("--m", flags.m, "Nakagami fading parameter");
  cmd->add_option("--n-users", flags.n_users, "NOMA cluster size");
  cmd->add_option("--pool-size", flags.pool_size, "associated users to select from");
  cmd->add_option("--select", flags.select, "comma-separated 1-based ranks, e.g. 1,3");
  cmd->add_option("--theta", flags.theta, "SIR threshold (linear)");
  cmd->add_option("--beta", flags.beta, "residual SIC fraction in [0,1]");
  cmd->add_option("--msp-mode", flags.msp_mode, "first-term|unconditional");
  cmd->add_option("--direction", flags.direction, "uplink|downlink");
  cmd->add_option("--workers", flags.workers, "worker threads (0 = hardware)");
  cmd->add_flag("--voronoi", flags.voronoi, "draw distances from full Voronoi simulation");
}

std::string format_full(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void apply_flags(noma::ExperimentConfig& config, const CliFlags& flags) {
  using noma::apply_key_value;
  if (!flags.model.empty()) apply_key_value(config, "model", flags.model);
  if (flags.alpha) apply_key_value(config, "alpha", format_full(*flags.alpha));
  if (flags.m) apply_key_value(config, "m", format_full(*flags.m));
  if (flags.n_users) apply_key_value(config, "n-users", std::to_string(*flags.n_users));
  if (flags.pool_size) apply_key_value(config, "pool-size", std::to_string(*flags.pool_size));
  if (!flags.select.empty()) apply_key_value(config, "select", flags.select);
  if (flags.theta) apply_key_value(config, "theta", format_full(*flags.theta));
  if (flags.beta) apply_key_value(config, "beta", format_full(*flags.beta));
  if (!flags.msp_mode.empty()) apply_key_value(config, "msp-mode", flags.msp_mode);
  if (!flags.direction.empty()) apply_key_value(config, "direction", flags.direction);
  if (flags.seed) apply_key_value(config, "seed", std::to_string(*flags.seed));
  if (flags.samples) apply_key_value(config, "samples", std::to_string(*flags.samples));
  if (flags.workers) apply_key_value(config, "workers", std::to_string(*flags.workers));
  if (flags.voronoi) apply_key_value(config, "voronoi", "1");
  if (!flags.out.empty()) apply_key_value(config, "out", flags.out);
}

int run_cli(int argc, char** argv) {
  CLI::App app{"NOMA distance-ranking accuracy probability and coverage experiments"};
  app.require_subcommand(1);
  CliFlags flags;
  std::string figure;

  CLI::App* analytic = app.add_subcommand("analytic", "series/quadrature accuracy evaluators");
  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo accuracy estimate");
  CLI::App* coverage = app.add_subcommand("coverage", "uplink/downlink coverage simulation");
  CLI::App* reproduce_cmd =
      app.add_subcommand("reproduce", "preset grid for one of the summary figures");
  CLI::App* sweep = app.add_subcommand("sweep", "analytic plus Monte Carlo grid sweep");
  for (CLI::App* cmd : {analytic, mc, coverage, reproduce_cmd, sweep})
    add_common_options(cmd, flags);
  reproduce_cmd->add_option("figure", figure, "fig1|fig2|fig3|fig4|fig5|fig6")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  noma::ExperimentConfig config;
  if (reproduce_cmd->parsed()) {
    config = noma::figure_preset(figure);
  } else if (!flags.config_path.empty()) {
    config = noma::load_config(flags.config_path);
  }
  if (analytic->parsed()) config.kind = "accuracy-analytic";
  if (mc->parsed()) config.kind = "accuracy-mc";
  if (coverage->parsed()) config.kind = "coverage-mc";
  if (sweep->parsed()) config.kind = "sweep";
  apply_flags(config, flags);

  const std::vector<std::string> lines = noma::run(config);
  if (config.output_path.empty()) {
    for (const std::string& line : lines) std::printf("%s\n", line.c_str());
  } else {
    std::size_t rows = 0, errors = 0;
    for (const std::string& line : lines) {
      if (line.rfind("# error:", 0) == 0) ++errors;
      else if (!line.empty() && line[0] != '#' && line != noma::kCsvHeader) ++rows;
    }
    std::printf("wrote %zu data rows (%zu errors) to %s\n", rows, errors,
                config.output_path.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const noma::parameter_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const noma::domain_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const noma::numerical_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  } catch (const std::ios_base::failure& e) {
    std::fprintf(stderr, "I/O failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "failure: %s\n", e.what());
    return 2;
  }
}
