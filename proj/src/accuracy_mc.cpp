// SPDX-License-Identifier: Apache-2.0
#include "noma/accuracy_mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <thread>

namespace noma {

namespace detail {

void for_each_block(std::uint64_t n_samples, std::uint64_t block_size, int workers,
                    const std::function<void(std::uint64_t, std::uint64_t)>& work) {
  const std::uint64_t bs = std::max<std::uint64_t>(1, block_size);
  const std::uint64_t n_blocks = (n_samples + bs - 1) / bs;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const std::uint64_t want = workers > 0 ? static_cast<std::uint64_t>(workers) : hw;
  const std::uint64_t n_workers = std::min<std::uint64_t>(want, n_blocks);
  auto block_count = [&](std::uint64_t b) { return std::min(bs, n_samples - b * bs); };
  if (n_workers <= 1) {
    for (std::uint64_t b = 0; b < n_blocks; ++b) work(b, block_count(b));
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (std::uint64_t w = 0; w < n_workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::uint64_t b = next.fetch_add(1);
        if (b >= n_blocks) return;
        try {
          work(b, block_count(b));
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

namespace {

struct SamplePlan {
  const ClusterSpec* spec = nullptr;
  bool voronoi = false;
  double lambda = 0.0;
  double lambda_u = 0.0;
  double window = 0.0;
};

SamplePlan make_plan(const ClusterSpec& spec, bool ground_truth_voronoi,
                     const McOptions& options) {
  validate(spec);
  SamplePlan plan;
  plan.spec = &spec;
  plan.voronoi = ground_truth_voronoi;
  if (ground_truth_voronoi) {
    if (!std::holds_alternative<PppVoronoi>(spec.model))
      throw parameter_error("Voronoi ground truth requires the PppVoronoi model");
    if (spec.pairing)
      throw parameter_error("Voronoi ground truth does not support rank selection");
    if (!spec.fixed_distances.empty())
      throw parameter_error("Voronoi ground truth does not support fixed distances");
    plan.lambda = std::get<PppVoronoi>(spec.model).lambda;
    plan.lambda_u = options.lambda_u_factor * plan.lambda;
    plan.window = 4.0 / std::sqrt(plan.lambda * std::numbers::pi);
  }
  return plan;
}

// Per-thread scratch buffers for one cluster draw.
struct Scratch {
  std::vector<double> dist;
  std::vector<double> pool;
  std::vector<double> scores;
};

// Fills scores[i] = ln h_i - alpha ln r_i for the i-th nearest user.
void draw_scores(const SamplePlan& plan, rng::Engine& g, Scratch& s) {
  const ClusterSpec& spec = *plan.spec;
  const int n = spec.n_users;
  if (!spec.fixed_distances.empty()) {
    s.dist.assign(spec.fixed_distances.begin(), spec.fixed_distances.end());
  } else if (plan.voronoi) {
    OrderedDistances od =
        simulate_voronoi_cell(plan.lambda, plan.lambda_u, n, plan.window, g);
    s.dist = std::move(od.values);
  } else if (spec.pairing) {
    const int pool_size = spec.pairing->pool_size;
    s.pool.resize(pool_size);
    for (int i = 0; i < pool_size; ++i) s.pool[i] = sample_distance(spec.model, g);
    std::sort(s.pool.begin(), s.pool.end());
    s.dist.resize(n);
    for (int i = 0; i < n; ++i) s.dist[i] = s.pool[spec.pairing->ranks[i] - 1];
  } else {
    s.dist.resize(n);
    for (int i = 0; i < n; ++i) s.dist[i] = sample_distance(spec.model, g);
    std::sort(s.dist.begin(), s.dist.end());
  }
  s.scores.resize(n);
  for (int i = 0; i < n; ++i)
    s.scores[i] = std::log(sample_gamma(spec.fading, g)) - spec.alpha * std::log(s.dist[i]);
}

bool strictly_descending(const std::vector<double>& scores) {
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (!(scores[i - 1] > scores[i])) return false;
  return true;
}

std::uint64_t factorial_u(int n) {
  std::uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Lehmer code of the decode order (indices of users by descending score).
std::size_t lehmer_index(const int* perm, int n) {
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    int smaller_after = 0;
    for (int j = i + 1; j < n; ++j)
      if (perm[j] < perm[i]) ++smaller_after;
    idx = idx * (n - i) + smaller_after;
  }
  return idx;
}

}  // namespace

McEstimate estimate_accuracy(const ClusterSpec& spec, std::uint64_t n_samples,
                             std::uint64_t seed, bool ground_truth_voronoi,
                             const McOptions& options) {
  if (n_samples < 10000) throw parameter_error("Monte Carlo runs need at least 1e4 samples");
  const SamplePlan plan = make_plan(spec, ground_truth_voronoi, options);
  const std::uint64_t bs = std::max<std::uint64_t>(1, options.block_size);
  const std::uint64_t n_blocks = (n_samples + bs - 1) / bs;
  std::vector<std::uint64_t> hits(n_blocks, 0);
  detail::for_each_block(n_samples, bs, options.workers,
                         [&](std::uint64_t block, std::uint64_t count) {
                           rng::Engine g = rng::make_stream(seed, block);
                           Scratch scratch;
                           std::uint64_t h = 0;
                           for (std::uint64_t i = 0; i < count; ++i) {
                             draw_scores(plan, g, scratch);
                             h += strictly_descending(scratch.scores) ? 1 : 0;
                           }
                           hits[block] = h;
                         });
  std::uint64_t total = 0;
  for (std::uint64_t h : hits) total += h;
  const double p = static_cast<double>(total) / static_cast<double>(n_samples);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
  return {p, se, n_samples, seed};
}

std::map<std::vector<int>, double> estimate_permutation_distribution(
    const ClusterSpec& spec, std::uint64_t n_samples, std::uint64_t seed,
    const McOptions& options) {
  if (n_samples < 100000)
    throw parameter_error("permutation distribution needs at least 1e5 samples");
  if (spec.n_users > 5)
    throw parameter_error("permutation distribution supports at most 5 users");
  const SamplePlan plan = make_plan(spec, false, options);
  const int n = spec.n_users;
  const std::uint64_t n_cells = factorial_u(n);
  const std::uint64_t bs = std::max<std::uint64_t>(1, options.block_size);
  const std::uint64_t n_blocks = (n_samples + bs - 1) / bs;
  std::vector<std::vector<std::uint64_t>> counts(n_blocks);
  detail::for_each_block(
      n_samples, bs, options.workers, [&](std::uint64_t block, std::uint64_t count) {
        rng::Engine g = rng::make_stream(seed, block);
        Scratch scratch;
        std::vector<std::uint64_t> local(n_cells, 0);
        int order[5];
        for (std::uint64_t i = 0; i < count; ++i) {
          draw_scores(plan, g, scratch);
          for (int j = 0; j < n; ++j) order[j] = j;
          std::stable_sort(order, order + n, [&](int a, int b) {
            return scratch.scores[a] > scratch.scores[b];
          });
          ++local[lehmer_index(order, n)];
        }
        counts[block] = std::move(local);
      });
  std::vector<std::uint64_t> total(n_cells, 0);
  for (const auto& local : counts)
    for (std::uint64_t c = 0; c < n_cells; ++c) total[c] += local[c];
  std::map<std::vector<int>, double> out;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  do {
    const std::size_t idx = lehmer_index(perm.data(), n);
    std::vector<int> key(n);
    for (int i = 0; i < n; ++i) key[i] = perm[i] + 1;
    out[key] = static_cast<double>(total[idx]) / static_cast<double>(n_samples);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace noma
