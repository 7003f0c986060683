// SPDX-License-Identifier: Apache-2.0
#include "noma/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace noma {

namespace {

constexpr double kPi = std::numbers::pi;

void check_window(double lambda, double window) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw parameter_error("interferer intensity lambda must be positive");
  const double min_w = 4.0 / std::sqrt(lambda * kPi);
  if (!(window >= min_w * (1.0 - 1e-12)))
    throw parameter_error("interference window must be >= 4/sqrt(lambda*pi)");
}

double auto_window(const CoverageConfig& config) {
  return config.window > 0.0 ? config.window
                             : 4.0 / std::sqrt(config.lambda * kPi);
}

}  // namespace

void validate(const CoverageConfig& config) {
  validate(config.model);
  validate(config.fading);
  if (!(config.theta > 0.0) || !std::isfinite(config.theta))
    throw parameter_error("SIR threshold theta must be positive");
  if (!(config.beta >= 0.0 && config.beta <= 1.0))
    throw parameter_error("residual SIC fraction beta must lie in [0, 1]");
  if (!(config.alpha > 2.0) || !std::isfinite(config.alpha))
    throw parameter_error("path-loss exponent must satisfy alpha > 2");
  if (!(config.noise >= 0.0)) throw parameter_error("noise power must be nonnegative");
  if (!(config.lambda > 0.0) || !std::isfinite(config.lambda))
    throw parameter_error("BS intensity lambda must be positive");
  if (!(config.p_tx > 0.0) || !(config.p_bs > 0.0))
    throw parameter_error("transmit powers must be positive");
  if (config.direction == Direction::downlink) {
    if (!(config.a1 > 0.0 && config.a1 < config.a2 && config.a2 < 1.0))
      throw parameter_error("power allocation must satisfy 0 < a1 < a2 < 1");
    if (std::abs(config.a1 + config.a2 - 1.0) > 1e-12)
      throw parameter_error("power allocation must satisfy a1 + a2 = 1");
  }
  if (config.window > 0.0) check_window(config.lambda, config.window);
}

double interference_field_uplink(double lambda, const DistanceModel& model, double alpha,
                                 const FadingModel& fading, double p_tx, double window,
                                 rng::Engine& g) {
  validate(model);
  validate(fading);
  check_window(lambda, window);
  if (!(p_tx > 0.0)) throw parameter_error("transmit power must be positive");
  // Interfering BSs in radius order: squared distances are the arrivals of a
  // rate lambda*pi one-dimensional Poisson process.
  const double rate = lambda * kPi;
  double field = 0.0;
  double s = 0.0;
  for (;;) {
    s += -std::log(rng::uniform01(g)) / rate;
    const double rho = std::sqrt(s);
    if (rho > window) break;
    const double u = sample_distance(model, g);
    const double psi = 2.0 * kPi * rng::uniform01(g);
    const double d2 = rho * rho + u * u + 2.0 * rho * u * std::cos(psi);
    const double gain = sample_gamma(fading, g);
    field += p_tx * gain * std::pow(d2, -0.5 * alpha);
  }
  return field;
}

double interference_field_downlink(double lambda, double alpha, const FadingModel& fading,
                                   double p_bs, double user_distance, double window,
                                   rng::Engine& g, double serving_keepout,
                                   bool association_keepout) {
  validate(fading);
  check_window(lambda, window);
  if (!(p_bs > 0.0)) throw parameter_error("transmit power must be positive");
  if (!(user_distance >= 0.0)) throw parameter_error("user distance must be nonnegative");
  const double rate = lambda * kPi;
  double field = 0.0;
  double s = 0.0;
  for (;;) {
    s += -std::log(rng::uniform01(g)) / rate;
    const double rho = std::sqrt(s);
    if (rho > window) break;
    const double phi = 2.0 * kPi * rng::uniform01(g);
    if (association_keepout && rho < user_distance) continue;
    if (serving_keepout > 0.0) {
      const double d_serv2 = rho * rho + user_distance * user_distance -
                             2.0 * rho * user_distance * std::cos(phi);
      if (d_serv2 < serving_keepout * serving_keepout) continue;
    }
    const double gain = sample_gamma(fading, g);
    field += p_bs * gain * std::pow(rho, -alpha);
  }
  return field;
}

namespace {

struct Tally {
  std::uint64_t n_event = 0;  // instantaneous order matches distance order
  std::uint64_t near_b1 = 0, near_b2 = 0;
  std::uint64_t far_b1 = 0, far_b2 = 0;
  std::uint64_t near_uncond = 0, far_uncond = 0;

  void add(const Tally& o) {
    n_event += o.n_event;
    near_b1 += o.near_b1;
    near_b2 += o.near_b2;
    far_b1 += o.far_b1;
    far_b2 += o.far_b2;
    near_uncond += o.near_uncond;
    far_uncond += o.far_uncond;
  }
};

McEstimate ratio_estimate(std::uint64_t hits, std::uint64_t n, std::uint64_t seed) {
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n, seed};
}

CoverageOutcome assemble(const Tally& t, std::uint64_t n, std::uint64_t seed) {
  const double nn = static_cast<double>(n);
  const double w1 = static_cast<double>(t.n_event) / nn;
  const double w2 = 1.0 - w1;
  const std::uint64_t n_bar = n - t.n_event;
  auto cond = [](std::uint64_t hits, std::uint64_t base) {
    return base ? static_cast<double>(hits) / static_cast<double>(base) : 0.0;
  };
  CoverageOutcome out;
  out.isp.ranking = Ranking::isp;
  out.isp.p_cov_near = ratio_estimate(t.near_b1 + t.near_b2, n, seed);
  out.isp.p_cov_far = ratio_estimate(t.far_b1 + t.far_b2, n, seed);
  out.isp.near_branches = {w1, cond(t.near_b1, t.n_event), w2, cond(t.near_b2, n_bar)};
  out.isp.far_branches = {w1, cond(t.far_b1, t.n_event), w2, cond(t.far_b2, n_bar)};

  out.msp_first_term.ranking = Ranking::msp;
  out.msp_first_term.p_cov_near = ratio_estimate(t.near_b1, n, seed);
  out.msp_first_term.p_cov_far = ratio_estimate(t.far_b1, n, seed);
  out.msp_first_term.near_branches = {w1, cond(t.near_b1, t.n_event), w2, 0.0};
  out.msp_first_term.far_branches = {w1, cond(t.far_b1, t.n_event), w2, 0.0};

  out.msp_unconditional.ranking = Ranking::msp;
  out.msp_unconditional.p_cov_near = ratio_estimate(t.near_uncond, n, seed);
  out.msp_unconditional.p_cov_far = ratio_estimate(t.far_uncond, n, seed);
  out.msp_unconditional.near_branches = {1.0, out.msp_unconditional.p_cov_near.estimate, 0.0, 0.0};
  out.msp_unconditional.far_branches = {1.0, out.msp_unconditional.p_cov_far.estimate, 0.0, 0.0};
  return out;
}

template <typename PerSample>
CoverageOutcome run_coverage(std::uint64_t n_samples, std::uint64_t seed,
                             const McOptions& options, PerSample&& per_sample) {
  if (n_samples < 10000) throw parameter_error("Monte Carlo runs need at least 1e4 samples");
  const std::uint64_t bs = std::max<std::uint64_t>(1, options.block_size);
  const std::uint64_t n_blocks = (n_samples + bs - 1) / bs;
  std::vector<Tally> tallies(n_blocks);
  detail::for_each_block(n_samples, bs, options.workers,
                         [&](std::uint64_t block, std::uint64_t count) {
                           rng::Engine g = rng::make_stream(seed, block);
                           Tally local;
                           for (std::uint64_t i = 0; i < count; ++i) per_sample(g, local);
                           tallies[block] = local;
                         });
  Tally total;
  for (const Tally& t : tallies) total.add(t);
  return assemble(total, n_samples, seed);
}

}  // namespace

CoverageOutcome uplink_coverage_mc(const CoverageConfig& config, std::uint64_t n_samples,
                                   std::uint64_t seed, const McOptions& options) {
  validate(config);
  if (config.direction != Direction::uplink)
    throw parameter_error("uplink_coverage_mc requires direction = uplink");
  const double window = auto_window(config);
  const double theta = config.theta, beta = config.beta, noise = config.noise;
  auto per_sample = [&, window](rng::Engine& g, Tally& t) {
    const OrderedDistances od = sample_ordered(config.model, 2, g);
    const double h1 = sample_gamma(config.fading, g);
    const double h2 = sample_gamma(config.fading, g);
    const double field = interference_field_uplink(config.lambda, config.model, config.alpha,
                                                   config.fading, config.p_tx, window, g);
    const double s1 = config.p_tx * h1 * std::pow(od.values[0], -config.alpha);
    const double s2 = config.p_tx * h2 * std::pow(od.values[1], -config.alpha);
    const bool event = s1 > s2;
    const bool near_first = s1 > theta * (s2 + field + noise);
    const bool near_second = s1 > theta * (beta * s2 + field + noise);
    const bool far_first = s2 > theta * (beta * s1 + field + noise);
    const bool far_second = s2 > theta * (s1 + field + noise);
    t.n_event += event;
    t.near_b1 += event && near_first;
    t.near_b2 += !event && near_second;
    t.far_b1 += event && far_first;
    t.far_b2 += !event && far_second;
    t.near_uncond += near_first;
    t.far_uncond += far_first;
  };
  return run_coverage(n_samples, seed, options, per_sample);
}

CoverageOutcome downlink_coverage_mc(const CoverageConfig& config, std::uint64_t n_samples,
                                     std::uint64_t seed, const McOptions& options) {
  validate(config);
  if (config.direction != Direction::downlink)
    throw parameter_error("downlink_coverage_mc requires direction = downlink");
  const double window = auto_window(config);
  const double theta = config.theta, beta = config.beta, noise = config.noise;
  const double a1 = config.a1, a2 = config.a2;
  const double serving_keepout =
      std::holds_alternative<Mcp>(config.model) ? std::get<Mcp>(config.model).radius : 0.0;
  const bool association_keepout = std::holds_alternative<PppVoronoi>(config.model);
  auto per_sample = [&, window](rng::Engine& g, Tally& t) {
    const OrderedDistances od = sample_ordered(config.model, 2, g);
    const double h1 = sample_gamma(config.fading, g);
    const double h2 = sample_gamma(config.fading, g);
    const double field1 =
        interference_field_downlink(config.lambda, config.alpha, config.fading, config.p_bs,
                                    od.values[0], window, g, serving_keepout, association_keepout);
    const double field2 =
        interference_field_downlink(config.lambda, config.alpha, config.fading, config.p_bs,
                                    od.values[1], window, g, serving_keepout, association_keepout);
    const double q1 = config.p_bs * h1 * std::pow(od.values[0], -config.alpha);
    const double q2 = config.p_bs * h2 * std::pow(od.values[1], -config.alpha);
    const bool event = q1 > q2;
    const bool near_first = a1 * q1 > theta * (beta * a2 * q1 + field1 + noise);
    const bool near_second = a2 * q1 > theta * (a1 * q1 + field1 + noise);
    const bool far_first = a2 * q2 > theta * (a1 * q2 + field2 + noise);
    const bool far_second = a1 * q2 > theta * (beta * a2 * q2 + field2 + noise);
    t.n_event += event;
    t.near_b1 += event && near_first;
    t.near_b2 += !event && near_second;
    t.far_b1 += event && far_first;
    t.far_b2 += !event && far_second;
    t.near_uncond += near_first;
    t.far_uncond += far_first;
  };
  return run_coverage(n_samples, seed, options, per_sample);
}

}  // namespace noma
