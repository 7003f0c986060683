// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "noma/accuracy_analytic.hpp"

namespace noma {

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

// Parallel execution knobs. Estimates are reproducible bit-for-bit for a
// given (seed, block_size) no matter how many workers run, because every
// block of samples owns a substream seeded from (seed, block index).
struct McOptions {
  int workers = 0;                   // 0 = hardware concurrency
  std::uint64_t block_size = 65536;  // samples per seeded block
  double lambda_u_factor = 10.0;     // user/BS intensity ratio for Voronoi ground truth
};

// P(instantaneous-power ranking matches the distance ranking), estimated by
// simulation of the cluster spec. With ground_truth_voronoi the distances
// come from full typical-cell simulation (model must be PppVoronoi) instead
// of the fitted density. Requires n_samples >= 1e4.
McEstimate estimate_accuracy(const ClusterSpec& spec, std::uint64_t n_samples,
                             std::uint64_t seed, bool ground_truth_voronoi = false,
                             const McOptions& options = {});

// Distribution over all n! instantaneous-power orderings (keys are 1-based
// user indices in decode order; {1,2,..,n} is the distance order). Requires
// n_samples >= 1e5 and n_users <= 5. With n_samples a power of two every
// cell probability is an exact dyadic count ratio and the values sum to 1
// exactly; the {1,..,n} cell equals estimate_accuracy for the same seed.
std::map<std::vector<int>, double> estimate_permutation_distribution(
    const ClusterSpec& spec, std::uint64_t n_samples, std::uint64_t seed,
    const McOptions& options = {});

namespace detail {
// Runs work(block_index, samples_in_block) over all blocks on a small thread
// pool; used by every Monte Carlo operation in the library.
void for_each_block(std::uint64_t n_samples, std::uint64_t block_size, int workers,
                    const std::function<void(std::uint64_t, std::uint64_t)>& work);
}  // namespace detail

}  // namespace noma
