// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "noma/geometry.hpp"
#include "noma/numerics.hpp"

namespace noma {

// Distance-ranked user selection: from pool_size associated users, pick the
// ones at the given ascending 1-based ranks (e.g. {1,3} = nearest and
// farthest of 3).
struct Pairing {
  int pool_size = 0;
  std::vector<int> ranks;
};

// Everything that pins down one NOMA cluster's accuracy probability.
// fixed_distances, when nonempty, replaces the random distances with a
// pinned ascending set (degenerate clusters for testing).
struct ClusterSpec {
  DistanceModel model = Mcp{1.0};
  double alpha = 4.0;
  FadingModel fading{};
  int n_users = 2;
  std::optional<Pairing> pairing{};
  std::vector<double> fixed_distances{};
};

void validate(const ClusterSpec& spec);

// E[ indicator of correct ranking | distances ] for Rayleigh fading:
// prod_{i=2}^{N} 1 / sum_{j<=i} (r_j / r_i)^alpha. Distances ascending.
double inner_expectation_rayleigh(const OrderedDistances& distances, double alpha);

// Random selection, Rayleigh fading. The 2-UE value comes from the
// alternating series; MCP terms are closed-form, PPP/TCP terms carry a 2F1
// factor. alpha >= 2 here; every other evaluator requires alpha > 2.
Estimate accuracy_rayleigh_2ue(const DistanceModel& model, double alpha);

// 3-UE and general-N random selection, Rayleigh: tensor quadrature of the
// ratio-substituted ordered-distance integral, n_users in [2, 6].
Estimate accuracy_rayleigh_3ue(const DistanceModel& model, double alpha);
Estimate accuracy_rayleigh_general(const DistanceModel& model, double alpha, int n_users);

// Random selection, Nakagami-m fading, m >= 0.5.
Estimate accuracy_nakagami_2ue(const DistanceModel& model, double alpha, double m);
Estimate accuracy_nakagami_3ue(const DistanceModel& model, double alpha, double m);

// Nearest-plus-farthest selection out of pool_size users, Rayleigh.
Estimate accuracy_pairing_rayleigh_2ue(const DistanceModel& model, double alpha,
                                       int pool_size);

// Arbitrary rank selection. Quadrature for Rayleigh with n_users <= 4 and
// for Nakagami with n_users = 2; otherwise falls back to an internal
// fixed-seed Monte Carlo run and tags the estimate monte-carlo.
Estimate accuracy_pairing_general(const ClusterSpec& spec);

// Dispatch to the matching evaluator above.
Estimate accuracy_analytic(const ClusterSpec& spec);

}  // namespace noma
