// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "noma/errors.hpp"
#include "noma/rng.hpp"

namespace noma {

// Serving-distance models for one user in the typical cell.
//
// PppVoronoi: nearest-BS distance in a Poisson cellular network, with the
// c = 5/4 correction that accounts for selecting users of the typical cell.
struct PppVoronoi {
  double lambda = 1.0;
  double c = 1.25;
};

// Mcp: user uniform in a disk of the given radius around its BS.
struct Mcp {
  double radius = 1.0;
};

// Tcp: user scattered around its BS with a symmetric Gaussian of variance
// sigma2 per axis, so the distance is Rayleigh(sqrt(sigma2)).
struct Tcp {
  double sigma2 = 1.0;
};

using DistanceModel = std::variant<PppVoronoi, Mcp, Tcp>;

void validate(const DistanceModel& model);

// "ppp" | "mcp" | "tcp", the CSV and CLI spelling.
std::string model_name(const DistanceModel& model);

double pdf(const DistanceModel& model, double x);
double cdf(const DistanceModel& model, double x);

// One serving distance by inverse-CDF sampling.
double sample_distance(const DistanceModel& model, rng::Engine& g);

// Ascending serving distances of one NOMA cluster.
struct OrderedDistances {
  std::vector<double> values;
};

OrderedDistances sample_ordered(const DistanceModel& model, int n, rng::Engine& g);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// One realization of a Poisson cellular network in a square window centered
// on the conditioned BS at the origin.
struct VoronoiScene {
  std::vector<Point> bs_points;          // origin BS first
  std::vector<Point> user_points;
  std::vector<double> typical_cell_users;  // distances of users served by the origin BS
  double lambda_u = 0.0;
};

VoronoiScene make_voronoi_scene(double lambda, double lambda_u,
                                double window_half_width, rng::Engine& g);

struct VoronoiStats {
  std::uint64_t scenes_drawn = 0;
  std::uint64_t scenes_accepted = 0;
};

// Ascending distances of n users drawn uniformly from the typical cell of a
// full Voronoi simulation; scenes with fewer than n users are rejected.
// Ground truth against which the PppVoronoi approximation is checked.
OrderedDistances simulate_voronoi_cell(double lambda, double lambda_u, int n,
                                       double window_half_width, rng::Engine& g,
                                       VoronoiStats* stats = nullptr);

}  // namespace noma
