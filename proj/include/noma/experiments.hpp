// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "noma/accuracy_analytic.hpp"
#include "noma/coverage.hpp"

namespace noma {

inline constexpr const char* kCsvHeader =
    "kind,model,alpha,m,n_users,pool_size,selection,theta,beta,ranking,method,"
    "value,error,n_samples,seed,runtime_ms";

// One CSV record. Absent fields serialize as empty columns; floats carry 9
// significant digits; selection is dash-joined ("1-3").
struct ResultRow {
  std::string kind;
  std::string model;
  std::optional<double> alpha;
  std::optional<double> m;
  std::optional<int> n_users;
  std::optional<int> pool_size;
  std::vector<int> selection;
  std::optional<double> theta;
  std::optional<double> beta;
  std::string ranking;
  std::string method;
  std::optional<double> value;
  std::optional<double> error;
  std::optional<std::uint64_t> n_samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> runtime_ms;
};

std::string to_csv(const ResultRow& row);
ResultRow row_from_csv(const std::string& line);

// Grid-shaped experiment description. Scalar fields are shared; vector
// fields are swept in nested order (model, pairing, n_users, alpha, m,
// theta, beta).
struct ExperimentConfig {
  std::string kind = "accuracy-analytic";  // accuracy-analytic | accuracy-mc | coverage-mc | sweep
  std::vector<std::string> models{"mcp"};
  std::vector<double> alphas{4.0};
  std::vector<double> ms{1.0};
  std::vector<int> n_users_grid{2};
  std::vector<std::pair<int, std::vector<int>>> pairings;  // (pool size, ranks)
  std::vector<double> thetas{1.0};
  std::vector<double> betas{0.0};
  std::string direction = "uplink";
  std::string msp_mode = "first-term";
  bool emit_both_msp = false;
  bool voronoi = false;
  double lambda = 5e-4;
  double radius = 20.0;
  double sigma2 = 25.0;
  double omega = 1.0;
  double a1 = 0.3;
  double a2 = 0.7;
  double noise = 0.0;
  double p_tx = 1.0;
  double p_bs = 1.0;
  std::uint64_t seed = 1;
  std::uint64_t n_samples = 1'000'000;
  int workers = 0;
  std::string output_path;
};

// Applies one "key=value" setting; comma-separated values fill grid axes.
void apply_key_value(ExperimentConfig& config, const std::string& key,
                     const std::string& value);

// Flat key=value file; '#' starts a comment.
ExperimentConfig load_config(const std::string& path);

// Runs the grid and returns every output line: '#' preamble comments, the
// header, then data rows in deterministic order (analytic before Monte
// Carlo). Writes the same lines to config.output_path when set.
std::vector<std::string> run(const ExperimentConfig& config);

// Preset configs reproducing the figure data tables.
ExperimentConfig figure_preset(const std::string& figure);

std::vector<std::string> reproduce(const std::string& figure,
                                   const std::string& output_path);

}  // namespace noma
