// SPDX-License-Identifier: Apache-2.0
#include "noma/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "noma/accuracy_mc.hpp"

namespace noma {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string format_selection(const std::vector<int>& ranks) {
  std::string out;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(ranks[i]);
  }
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw parameter_error("not a number: '" + text + "'");
  }
  if (used != text.size()) throw parameter_error("not a number: '" + text + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& text) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    // stoull wraps a leading minus instead of failing.
    if (!text.empty() && text[0] == '-') throw parameter_error("");
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    throw parameter_error("not a count: '" + text + "'");
  }
  if (used != text.size()) throw parameter_error("not a count: '" + text + "'");
  return v;
}

int parse_int(const std::string& text) {
  const double v = parse_double(text);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw parameter_error("not an integer: '" + text + "'");
  return static_cast<int>(v);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& part : split(text, ','))
    if (!trim(part).empty()) out.push_back(parse_double(trim(part)));
  if (out.empty()) throw parameter_error("empty value list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const std::string& part : split(text, ','))
    if (!trim(part).empty()) out.push_back(parse_int(trim(part)));
  if (out.empty()) throw parameter_error("empty value list");
  return out;
}

bool parse_bool(const std::string& text) {
  if (text == "1" || text == "true" || text == "yes") return true;
  if (text == "0" || text == "false" || text == "no") return false;
  throw parameter_error("not a boolean: '" + text + "'");
}

DistanceModel make_model(const ExperimentConfig& config, const std::string& name) {
  if (name == "ppp") return PppVoronoi{config.lambda};
  if (name == "mcp") return Mcp{config.radius};
  if (name == "tcp") return Tcp{config.sigma2};
  throw parameter_error("unknown model '" + name + "' (expected ppp|mcp|tcp)");
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

}  // namespace

std::string to_csv(const ResultRow& row) {
  std::string out;
  int n_fields = 0;
  auto field = [&](const std::string& text) {
    if (n_fields++) out += ',';
    out += text;
  };
  auto opt_double = [&](const std::optional<double>& v) { field(v ? format_double(*v) : ""); };
  auto opt_int = [&](const std::optional<int>& v) { field(v ? std::to_string(*v) : ""); };
  auto opt_u64 = [&](const std::optional<std::uint64_t>& v) {
    field(v ? std::to_string(*v) : "");
  };
  field(row.kind);
  field(row.model);
  opt_double(row.alpha);
  opt_double(row.m);
  opt_int(row.n_users);
  opt_int(row.pool_size);
  field(format_selection(row.selection));
  opt_double(row.theta);
  opt_double(row.beta);
  field(row.ranking);
  field(row.method);
  opt_double(row.value);
  opt_double(row.error);
  opt_u64(row.n_samples);
  opt_u64(row.seed);
  opt_double(row.runtime_ms);
  return out;
}

ResultRow row_from_csv(const std::string& line) {
  const std::vector<std::string> f = split(line, ',');
  if (f.size() != 16)
    throw parameter_error("CSV row must have 16 fields, got " + std::to_string(f.size()));
  ResultRow row;
  auto opt_double = [](const std::string& s) {
    return s.empty() ? std::optional<double>{} : std::optional<double>{parse_double(s)};
  };
  auto opt_int = [](const std::string& s) {
    return s.empty() ? std::optional<int>{} : std::optional<int>{parse_int(s)};
  };
  auto opt_u64 = [](const std::string& s) {
    return s.empty() ? std::optional<std::uint64_t>{} : std::optional<std::uint64_t>{parse_u64(s)};
  };
  row.kind = f[0];
  row.model = f[1];
  row.alpha = opt_double(f[2]);
  row.m = opt_double(f[3]);
  row.n_users = opt_int(f[4]);
  row.pool_size = opt_int(f[5]);
  if (!f[6].empty())
    for (const std::string& part : split(f[6], '-')) row.selection.push_back(parse_int(part));
  row.theta = opt_double(f[7]);
  row.beta = opt_double(f[8]);
  row.ranking = f[9];
  row.method = f[10];
  row.value = opt_double(f[11]);
  row.error = opt_double(f[12]);
  row.n_samples = opt_u64(f[13]);
  row.seed = opt_u64(f[14]);
  row.runtime_ms = opt_double(f[15]);
  return row;
}

void apply_key_value(ExperimentConfig& config, const std::string& raw_key,
                     const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "kind") config.kind = value;
  else if (key == "model") {
    config.models.clear();
    for (const std::string& part : split(value, ','))
      if (!trim(part).empty()) config.models.push_back(trim(part));
    if (config.models.empty()) throw parameter_error("empty model list");
  } else if (key == "alpha") config.alphas = parse_double_list(value);
  else if (key == "m") config.ms = parse_double_list(value);
  else if (key == "n-users") config.n_users_grid = parse_int_list(value);
  else if (key == "pool-size") {
    const int pool = parse_int(value);
    config.pairings = {{pool, {}}};
  } else if (key == "select") {
    if (config.pairings.empty()) config.pairings = {{0, {}}};
    config.pairings.back().second = parse_int_list(value);
  } else if (key == "theta") config.thetas = parse_double_list(value);
  else if (key == "beta") config.betas = parse_double_list(value);
  else if (key == "direction") config.direction = value;
  else if (key == "msp-mode") {
    config.msp_mode = value;
    config.emit_both_msp = value == "both";
  }
  else if (key == "voronoi") config.voronoi = parse_bool(value);
  else if (key == "lambda") config.lambda = parse_double(value);
  else if (key == "radius") config.radius = parse_double(value);
  else if (key == "sigma2") config.sigma2 = parse_double(value);
  else if (key == "omega") config.omega = parse_double(value);
  else if (key == "a1") config.a1 = parse_double(value);
  else if (key == "a2") config.a2 = parse_double(value);
  else if (key == "noise") config.noise = parse_double(value);
  else if (key == "p-tx") config.p_tx = parse_double(value);
  else if (key == "p-bs") config.p_bs = parse_double(value);
  else if (key == "seed") config.seed = parse_u64(value);
  else if (key == "samples") config.n_samples = parse_u64(value);
  else if (key == "workers") config.workers = parse_int(value);
  else if (key == "out") config.output_path = value;
  else throw parameter_error("unknown config key '" + key + "'");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read config file '" + path + "'");
  ExperimentConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line.substr(0, line.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw parameter_error("config line " + std::to_string(line_no) + " is not key=value");
    apply_key_value(config, text.substr(0, eq), text.substr(eq + 1));
  }
  return config;
}

namespace {

// Completes a pairing axis entry: a pool without ranks means nearest plus
// farthest; ranks without a pool is an error.
Pairing resolve_pairing(const std::pair<int, std::vector<int>>& entry) {
  if (entry.first <= 0) throw parameter_error("pairing selection requires pool-size");
  Pairing pairing;
  pairing.pool_size = entry.first;
  pairing.ranks = entry.second.empty() ? std::vector<int>{1, entry.first} : entry.second;
  return pairing;
}

struct RowSink {
  std::vector<std::string>& lines;
  void comment(const std::string& text) { lines.push_back("# " + text); }
  void row(const ResultRow& r) { lines.push_back(to_csv(r)); }
  void error(const std::string& context, const std::string& reason) {
    lines.push_back("# error: " + context + ": " + reason);
  }
};

ResultRow base_row(const ExperimentConfig& config, const std::string& model,
                   const ClusterSpec& spec) {
  ResultRow row;
  row.model = model;
  row.alpha = spec.alpha;
  row.m = spec.fading.m;
  row.n_users = spec.n_users;
  if (spec.pairing) {
    row.pool_size = spec.pairing->pool_size;
    row.selection = spec.pairing->ranks;
  }
  row.seed = config.seed;
  return row;
}

std::string grid_context(const std::string& model, const ClusterSpec& spec) {
  std::string out = "model=" + model + " alpha=" + format_double(spec.alpha) +
                    " m=" + format_double(spec.fading.m) +
                    " n_users=" + std::to_string(spec.n_users);
  if (spec.pairing)
    out += " pool=" + std::to_string(spec.pairing->pool_size) + " select=" +
           format_selection(spec.pairing->ranks);
  return out;
}

// Walks the accuracy grid in deterministic order, invoking visit(model name,
// cluster spec) per point.
template <typename Visit>
void for_each_accuracy_point(const ExperimentConfig& config, Visit&& visit) {
  for (const std::string& model_name : config.models) {
    if (config.pairings.empty()) {
      for (int n_users : config.n_users_grid)
        for (double alpha : config.alphas)
          for (double m : config.ms) {
            ClusterSpec spec;
            spec.model = make_model(config, model_name);
            spec.alpha = alpha;
            spec.fading = {m, config.omega};
            spec.n_users = n_users;
            visit(model_name, spec);
          }
    } else {
      for (const auto& entry : config.pairings)
        for (double alpha : config.alphas)
          for (double m : config.ms) {
            const Pairing pairing = resolve_pairing(entry);
            ClusterSpec spec;
            spec.model = make_model(config, model_name);
            spec.alpha = alpha;
            spec.fading = {m, config.omega};
            spec.n_users = static_cast<int>(pairing.ranks.size());
            spec.pairing = pairing;
            visit(model_name, spec);
          }
    }
  }
}

void run_accuracy_analytic(const ExperimentConfig& config, RowSink& sink) {
  for_each_accuracy_point(config, [&](const std::string& model_name, const ClusterSpec& spec) {
    Timer timer;
    try {
      const Estimate est = accuracy_analytic(spec);
      ResultRow row = base_row(config, model_name, spec);
      row.kind = "accuracy-analytic";
      row.method = method_name(est.method);
      row.value = est.value;
      row.error = est.error_bound;
      row.runtime_ms = timer.ms();
      sink.row(row);
    } catch (const std::exception& e) {
      sink.error(grid_context(model_name, spec), e.what());
    }
  });
}

void run_accuracy_mc(const ExperimentConfig& config, RowSink& sink) {
  McOptions options;
  options.workers = config.workers;
  for_each_accuracy_point(config, [&](const std::string& model_name, const ClusterSpec& spec) {
    Timer timer;
    try {
      const McEstimate est =
          estimate_accuracy(spec, config.n_samples, config.seed, config.voronoi, options);
      ResultRow row = base_row(config, model_name, spec);
      row.kind = "accuracy-mc";
      row.method = method_name(Method::monte_carlo);
      row.value = est.estimate;
      row.error = est.stderr_;
      row.n_samples = est.n_samples;
      row.runtime_ms = timer.ms();
      sink.row(row);
    } catch (const std::exception& e) {
      sink.error(grid_context(model_name, spec), e.what());
    }
  });
}

MspMode parse_msp_mode(const std::string& text) {
  if (text == "first-term") return MspMode::first_term;
  if (text == "unconditional") return MspMode::unconditional;
  throw parameter_error("msp-mode must be first-term or unconditional");
}

Direction parse_direction(const std::string& text) {
  if (text == "uplink") return Direction::uplink;
  if (text == "downlink") return Direction::downlink;
  throw parameter_error("direction must be uplink or downlink");
}

void run_coverage(const ExperimentConfig& config, RowSink& sink) {
  const Direction direction = parse_direction(config.direction);
  const MspMode mode =
      config.emit_both_msp ? MspMode::first_term : parse_msp_mode(config.msp_mode);
  McOptions options;
  options.workers = config.workers;
  for (const std::string& model_name : config.models) {
    for (double m : config.ms)
      for (double alpha : config.alphas)
        for (double theta : config.thetas)
          for (double beta : config.betas) {
            CoverageConfig cov;
            cov.direction = direction;
            cov.theta = theta;
            cov.beta = beta;
            cov.p_tx = config.p_tx;
            cov.p_bs = config.p_bs;
            cov.a1 = config.a1;
            cov.a2 = config.a2;
            cov.noise = config.noise;
            cov.model = make_model(config, model_name);
            cov.alpha = alpha;
            cov.fading = {m, config.omega};
            cov.lambda = config.lambda;
            const std::string context =
                "model=" + model_name + " alpha=" + format_double(alpha) +
                " m=" + format_double(m) + " theta=" + format_double(theta) +
                " beta=" + format_double(beta);
            Timer timer;
            CoverageOutcome outcome;
            try {
              outcome = direction == Direction::uplink
                            ? uplink_coverage_mc(cov, config.n_samples, config.seed, options)
                            : downlink_coverage_mc(cov, config.n_samples, config.seed, options);
            } catch (const std::exception& e) {
              sink.error(context, e.what());
              continue;
            }
            const double runtime = timer.ms();
            auto emit = [&](const CoverageResult& res, const std::string& ranking) {
              for (int user = 1; user <= 2; ++user) {
                const McEstimate& est = user == 1 ? res.p_cov_near : res.p_cov_far;
                ResultRow row;
                row.kind = "coverage-mc";
                row.model = model_name;
                row.alpha = alpha;
                row.m = m;
                row.n_users = 2;
                row.selection = {user};
                row.theta = theta;
                row.beta = beta;
                row.ranking = ranking;
                row.method = method_name(Method::monte_carlo);
                row.value = est.estimate;
                row.error = est.stderr_;
                row.n_samples = est.n_samples;
                row.seed = config.seed;
                row.runtime_ms = runtime;
                sink.row(row);
              }
            };
            emit(outcome.isp, "isp");
            if (config.emit_both_msp) {
              emit(outcome.msp_first_term, "msp-first-term");
              emit(outcome.msp_unconditional, "msp-unconditional");
            } else {
              emit(outcome.msp(mode), mode == MspMode::first_term ? "msp-first-term"
                                                                  : "msp-unconditional");
            }
          }
  }
}

void preamble(const ExperimentConfig& config, RowSink& sink) {
  sink.comment("kind=" + config.kind + " seed=" + std::to_string(config.seed) +
               " samples=" + std::to_string(config.n_samples));
  sink.comment("lambda=" + format_double(config.lambda) + " radius=" + format_double(config.radius) +
               " sigma2=" + format_double(config.sigma2) + " omega=" + format_double(config.omega));
  if (config.kind == "coverage-mc")
    sink.comment("direction=" + config.direction + " a1=" + format_double(config.a1) +
                 " a2=" + format_double(config.a2) + " noise=" + format_double(config.noise) +
                 " msp-mode=" + config.msp_mode);
}

}  // namespace

std::vector<std::string> run(const ExperimentConfig& config) {
  std::vector<std::string> lines;
  RowSink sink{lines};
  preamble(config, sink);
  lines.push_back(kCsvHeader);
  if (config.kind == "accuracy-analytic") {
    run_accuracy_analytic(config, sink);
  } else if (config.kind == "accuracy-mc") {
    run_accuracy_mc(config, sink);
  } else if (config.kind == "coverage-mc") {
    run_coverage(config, sink);
  } else if (config.kind == "sweep") {
    run_accuracy_analytic(config, sink);
    run_accuracy_mc(config, sink);
  } else {
    throw parameter_error("unknown experiment kind '" + config.kind + "'");
  }
  if (!config.output_path.empty()) {
    std::ofstream out(config.output_path);
    if (!out) throw std::ios_base::failure("cannot write '" + config.output_path + "'");
    for (const std::string& line : lines) out << line << '\n';
    out.flush();
    if (!out) throw std::ios_base::failure("failed writing '" + config.output_path + "'");
  }
  return lines;
}

ExperimentConfig figure_preset(const std::string& figure) {
  ExperimentConfig config;
  const std::vector<double> alpha_grid{2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0};
  if (figure == "fig1" || figure == "fig2") {
    config.kind = "coverage-mc";
    config.direction = figure == "fig1" ? "uplink" : "downlink";
    config.models = {"mcp"};
    config.lambda = 1e-4;
    config.radius = 10.0;
    config.noise = 0.0;
    config.alphas = {4.0};
    config.ms = {1.0};
    config.thetas.clear();
    for (double db = -10.0; db <= 10.0 + 1e-9; db += 2.5)
      config.thetas.push_back(std::pow(10.0, db / 10.0));
    config.betas = {0.0, 0.5};
    config.msp_mode = "both";
    config.emit_both_msp = true;
    config.n_samples = 200000;
  } else if (figure == "fig3") {
    config.kind = "accuracy-analytic";
    config.models = {"ppp", "mcp", "tcp"};
    config.n_users_grid = {2, 3};
    config.alphas = alpha_grid;
    config.ms = {1.0};
  } else if (figure == "fig4") {
    config.kind = "accuracy-analytic";
    config.models = {"ppp", "mcp", "tcp"};
    config.n_users_grid = {2, 3};
    config.alphas = alpha_grid;
    config.ms = {0.5, 1.0, 2.0};
  } else if (figure == "fig5") {
    config.kind = "accuracy-analytic";
    config.models = {"ppp", "mcp", "tcp"};
    config.n_users_grid = {2, 3};
    config.alphas = {4.0};
    config.ms = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
  } else if (figure == "fig6") {
    config.kind = "accuracy-mc";
    config.models = {"ppp", "mcp"};
    config.alphas = alpha_grid;
    config.ms = {1.0};
    config.pairings = {{2, {1, 2}}, {3, {1, 3}}, {3, {1, 2, 3}}, {4, {1, 4}}};
    config.n_samples = 1000000;
  } else {
    throw parameter_error("unknown figure '" + figure + "' (expected fig1..fig6)");
  }
  return config;
}

std::vector<std::string> reproduce(const std::string& figure,
                                   const std::string& output_path) {
  ExperimentConfig config = figure_preset(figure);
  config.output_path = output_path;
  return run(config);
}

}  // namespace noma
