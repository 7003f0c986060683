// SPDX-License-Identifier: Apache-2.0
#include "noma/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace noma {

namespace {

constexpr double kPi = std::numbers::pi;

// Rate of the squared-distance exponential for the PppVoronoi model.
double ppp_rate(const PppVoronoi& m) { return m.c * m.lambda * kPi; }

// Poisson count by accumulating unit-exponential arrivals up to `mean`.
// Exact for any mean and immune to the underflow of the product method.
std::uint64_t sample_poisson(double mean, rng::Engine& g) {
  if (!(mean > 0.0)) return 0;
  std::uint64_t k = 0;
  double acc = -std::log(rng::uniform01(g));
  while (acc < mean) {
    ++k;
    acc += -std::log(rng::uniform01(g));
  }
  return k;
}

}  // namespace

void validate(const DistanceModel& model) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PppVoronoi>) {
          if (!(m.lambda > 0.0) || !std::isfinite(m.lambda))
            throw parameter_error("PppVoronoi intensity lambda must be positive");
          if (!(m.c > 0.0) || !std::isfinite(m.c))
            throw parameter_error("PppVoronoi correction factor must be positive");
        } else if constexpr (std::is_same_v<T, Mcp>) {
          if (!(m.radius > 0.0) || !std::isfinite(m.radius))
            throw parameter_error("Mcp cluster radius must be positive");
        } else {
          if (!(m.sigma2 > 0.0) || !std::isfinite(m.sigma2))
            throw parameter_error("Tcp scattering variance must be positive");
        }
      },
      model);
}

std::string model_name(const DistanceModel& model) {
  if (std::holds_alternative<PppVoronoi>(model)) return "ppp";
  if (std::holds_alternative<Mcp>(model)) return "mcp";
  return "tcp";
}

double pdf(const DistanceModel& model, double x) {
  validate(model);
  if (!(x >= 0.0)) throw domain_error("distance must be nonnegative");
  return std::visit(
      [x](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PppVoronoi>) {
          const double k = ppp_rate(m);
          return 2.0 * k * x * std::exp(-k * x * x);
        } else if constexpr (std::is_same_v<T, Mcp>) {
          return x <= m.radius ? 2.0 * x / (m.radius * m.radius) : 0.0;
        } else {
          return x / m.sigma2 * std::exp(-x * x / (2.0 * m.sigma2));
        }
      },
      model);
}

double cdf(const DistanceModel& model, double x) {
  validate(model);
  if (!(x >= 0.0)) throw domain_error("distance must be nonnegative");
  return std::visit(
      [x](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PppVoronoi>) {
          return -std::expm1(-ppp_rate(m) * x * x);
        } else if constexpr (std::is_same_v<T, Mcp>) {
          const double q = x / m.radius;
          return q >= 1.0 ? 1.0 : q * q;
        } else {
          return -std::expm1(-x * x / (2.0 * m.sigma2));
        }
      },
      model);
}

double sample_distance(const DistanceModel& model, rng::Engine& g) {
  const double u = rng::uniform01(g);
  return std::visit(
      [u](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PppVoronoi>) {
          return std::sqrt(-std::log1p(-u) / ppp_rate(m));
        } else if constexpr (std::is_same_v<T, Mcp>) {
          return m.radius * std::sqrt(u);
        } else {
          return std::sqrt(-2.0 * m.sigma2 * std::log1p(-u));
        }
      },
      model);
}

OrderedDistances sample_ordered(const DistanceModel& model, int n, rng::Engine& g) {
  validate(model);
  if (n < 1) throw parameter_error("cluster size must be >= 1");
  OrderedDistances out;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = sample_distance(model, g);
  std::sort(out.values.begin(), out.values.end());
  return out;
}

VoronoiScene make_voronoi_scene(double lambda, double lambda_u,
                                double window_half_width, rng::Engine& g) {
  if (!(lambda > 0.0) || !(lambda_u > 0.0))
    throw parameter_error("point process intensities must be positive");
  if (!(window_half_width > 0.0)) throw parameter_error("window half-width must be positive");
  const double w = window_half_width;
  const double area = 4.0 * w * w;
  VoronoiScene scene;
  scene.lambda_u = lambda_u;
  scene.bs_points.push_back({0.0, 0.0});
  const std::uint64_t n_bs = sample_poisson(lambda * area, g);
  for (std::uint64_t i = 0; i < n_bs; ++i) {
    const double x = w * (2.0 * rng::uniform01(g) - 1.0);
    const double y = w * (2.0 * rng::uniform01(g) - 1.0);
    scene.bs_points.push_back({x, y});
  }
  const std::uint64_t n_user = sample_poisson(lambda_u * area, g);
  scene.user_points.reserve(n_user);
  for (std::uint64_t i = 0; i < n_user; ++i) {
    const double x = w * (2.0 * rng::uniform01(g) - 1.0);
    const double y = w * (2.0 * rng::uniform01(g) - 1.0);
    scene.user_points.push_back({x, y});
    const double d0_sq = x * x + y * y;
    bool origin_is_nearest = true;
    for (std::size_t b = 1; b < scene.bs_points.size(); ++b) {
      const double dx = x - scene.bs_points[b].x;
      const double dy = y - scene.bs_points[b].y;
      if (dx * dx + dy * dy < d0_sq) {
        origin_is_nearest = false;
        break;
      }
    }
    if (origin_is_nearest) scene.typical_cell_users.push_back(std::sqrt(d0_sq));
  }
  return scene;
}

OrderedDistances simulate_voronoi_cell(double lambda, double lambda_u, int n,
                                       double window_half_width, rng::Engine& g,
                                       VoronoiStats* stats) {
  if (n < 1) throw parameter_error("cluster size must be >= 1");
  if (!(lambda > 0.0) || !(lambda_u > 0.0))
    throw parameter_error("point process intensities must be positive");
  if (lambda_u / lambda < 3.0 * n)
    throw parameter_error("user intensity too low: require lambda_u/lambda >= 3n");
  const double min_w = 4.0 / std::sqrt(lambda * kPi);
  if (window_half_width < min_w * (1.0 - 1e-12))
    throw parameter_error("window half-width below 4/sqrt(lambda*pi)");
  for (int attempt = 0; attempt < 100000; ++attempt) {
    VoronoiScene scene = make_voronoi_scene(lambda, lambda_u, window_half_width, g);
    if (stats) ++stats->scenes_drawn;
    const std::size_t have = scene.typical_cell_users.size();
    if (have < static_cast<std::size_t>(n)) continue;
    if (stats) ++stats->scenes_accepted;
    // Uniform selection of n distinct users via a partial Fisher-Yates pass.
    std::vector<double>& pool = scene.typical_cell_users;
    OrderedDistances out;
    out.values.reserve(n);
    for (int i = 0; i < n; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng::uniform01(g) * (have - i));
      std::swap(pool[i], pool[std::min(j, have - 1)]);
      out.values.push_back(pool[i]);
    }
    std::sort(out.values.begin(), out.values.end());
    return out;
  }
  throw numerical_error("voronoi cell rejection sampling failed to find enough users");
}

}  // namespace noma
