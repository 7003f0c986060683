// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "noma/accuracy_mc.hpp"
#include "noma/geometry.hpp"
#include "noma/numerics.hpp"

namespace noma {

enum class Direction { uplink, downlink };
enum class Ranking { isp, msp };

// How the distance-ranked (MSP) coverage is read off the two-branch
// decomposition: the literal first term (which carries the probability of
// the ranking event) or the unconditional application of the distance-
// ranked decode order.
enum class MspMode { first_term, unconditional };

struct CoverageConfig {
  Direction direction = Direction::uplink;
  double theta = 1.0;   // SIR threshold, linear
  double beta = 0.0;    // residual fraction of an imperfectly cancelled signal
  double p_tx = 1.0;    // UE transmit power (uplink)
  double p_bs = 1.0;    // BS transmit power (downlink)
  double a1 = 0.3;      // near-user power allocation (downlink)
  double a2 = 0.7;      // far-user power allocation (downlink)
  double noise = 0.0;   // sigma_n^2
  DistanceModel model = Mcp{10.0};
  double alpha = 4.0;
  FadingModel fading{};
  double lambda = 1e-4;  // interfering-BS intensity
  double window = 0.0;   // interference window radius; 0 = 4/sqrt(lambda*pi)
};

void validate(const CoverageConfig& config);

// The two terms of the coverage decomposition: weight_k is the probability
// of the ranking event of branch k, conditional_k the coverage given it.
struct BranchDecomposition {
  double weight1 = 0.0;
  double conditional1 = 0.0;
  double weight2 = 0.0;
  double conditional2 = 0.0;
};

struct CoverageResult {
  McEstimate p_cov_near;
  McEstimate p_cov_far;
  Ranking ranking = Ranking::isp;
  BranchDecomposition near_branches;
  BranchDecomposition far_branches;
};

// One sampling pass yields the ISP coverage and both MSP readings on common
// random numbers.
struct CoverageOutcome {
  CoverageResult isp;
  CoverageResult msp_first_term;
  CoverageResult msp_unconditional;

  const CoverageResult& msp(MspMode mode) const {
    return mode == MspMode::first_term ? msp_first_term : msp_unconditional;
  }
};

CoverageOutcome uplink_coverage_mc(const CoverageConfig& config, std::uint64_t n_samples,
                                   std::uint64_t seed, const McOptions& options = {});

CoverageOutcome downlink_coverage_mc(const CoverageConfig& config, std::uint64_t n_samples,
                                     std::uint64_t seed, const McOptions& options = {});

// Total interference power at the typical BS from one active uplink user per
// interfering BS, the user placed by `model` around its BS. Interfering BSs
// form a radial Poisson process out to `window` (>= 4/sqrt(lambda*pi)), so a
// same-seed run with a larger window extends the same realization.
double interference_field_uplink(double lambda, const DistanceModel& model, double alpha,
                                 const FadingModel& fading, double p_tx, double window,
                                 rng::Engine& g);

// Total interference power at a user `user_distance` away from its serving
// BS, from all non-serving BSs. serving_keepout excludes BSs within that
// radius of the serving BS (Mcp cluster geometry); association_keepout
// excludes BSs closer to the user than its serving BS (nearest-BS
// association).
double interference_field_downlink(double lambda, double alpha, const FadingModel& fading,
                                   double p_bs, double user_distance, double window,
                                   rng::Engine& g, double serving_keepout = 0.0,
                                   bool association_keepout = false);

}  // namespace noma
