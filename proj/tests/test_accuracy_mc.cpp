// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "noma/accuracy_mc.hpp"

using namespace noma;

namespace {

ClusterSpec make_spec(DistanceModel model, double alpha, int n_users, double m = 1.0) {
  ClusterSpec spec;
  spec.model = model;
  spec.alpha = alpha;
  spec.n_users = n_users;
  spec.fading.m = m;
  return spec;
}

bool within_sigmas(double a, double sa, double b, double sb, double k) {
  return std::abs(a - b) <= k * std::sqrt(sa * sa + sb * sb) + 1e-15;
}

}  // namespace

TEST_CASE("sample-count and model guards") {
  const ClusterSpec spec = make_spec(Mcp{1.0}, 4.0, 2);
  CHECK_THROWS_AS(estimate_accuracy(spec, 9999, 1), parameter_error);
  CHECK_THROWS_AS(estimate_permutation_distribution(spec, 99999, 1), parameter_error);
  CHECK_THROWS_AS(estimate_permutation_distribution(make_spec(Mcp{1.0}, 4.0, 6), 1 << 17, 1),
                  parameter_error);
  CHECK_THROWS_AS(estimate_accuracy(spec, 100000, 1, true), parameter_error);
  ClusterSpec paired = make_spec(PppVoronoi{1.0}, 4.0, 2);
  paired.pairing = Pairing{3, {1, 3}};
  CHECK_THROWS_AS(estimate_accuracy(paired, 100000, 1, true), parameter_error);
}

TEST_CASE("estimates agree with the analytic values") {
  const std::uint64_t n = 1000000;
  {
    const McEstimate mc = estimate_accuracy(make_spec(Mcp{5.0}, 4.0, 2), n, 101);
    CHECK(within_sigmas(mc.estimate, mc.stderr_, std::numbers::pi / 4.0, 0.0, 3.0));
  }
  {
    const McEstimate mc = estimate_accuracy(make_spec(PppVoronoi{2e-4}, 4.0, 2), n, 102);
    CHECK(within_sigmas(mc.estimate, mc.stderr_, 0.846573590279973, 0.0, 3.0));
  }
  {
    const McEstimate mc = estimate_accuracy(make_spec(Tcp{25.0}, 4.0, 2), n, 103);
    CHECK(within_sigmas(mc.estimate, mc.stderr_, 0.846573590279973, 0.0, 3.0));
  }
  {
    const McEstimate mc = estimate_accuracy(make_spec(Mcp{5.0}, 4.0, 3), n, 104);
    CHECK(within_sigmas(mc.estimate, mc.stderr_, 0.5093866601325, 0.0, 3.0));
  }
  {
    const McEstimate mc = estimate_accuracy(make_spec(PppVoronoi{2e-4}, 4.0, 3), n, 105);
    CHECK(within_sigmas(mc.estimate, mc.stderr_, 0.6198946075876, 0.0, 3.0));
  }
}

TEST_CASE("rank-selected estimate agrees with the quadrature value") {
  ClusterSpec paired = make_spec(PppVoronoi{1e-3}, 4.0, 2);
  paired.pairing = Pairing{3, {1, 3}};
  const McEstimate mc = estimate_accuracy(paired, 1000000, 106);
  CHECK(within_sigmas(mc.estimate, mc.stderr_, 0.934447938045, 0.0, 3.0));
}

TEST_CASE("nakagami estimate agrees with the quadrature value") {
  const McEstimate mc = estimate_accuracy(make_spec(Mcp{1.0}, 4.0, 2, 2.0), 1000000, 107);
  CHECK(within_sigmas(mc.estimate, mc.stderr_, 0.839048622548086, 0.0, 3.0));
}

TEST_CASE("fixed distances reproduce the conditional probability") {
  ClusterSpec pinned = make_spec(Mcp{1.0}, 4.0, 2);
  pinned.fixed_distances = {1.0, 2.0};
  const McEstimate mc = estimate_accuracy(pinned, 200000, 108);
  CHECK(within_sigmas(mc.estimate, mc.stderr_,
                      inner_expectation_rayleigh({{1.0, 2.0}}, 4.0), 0.0, 3.0));
}

TEST_CASE("estimates are reproducible and worker-count independent") {
  const ClusterSpec spec = make_spec(PppVoronoi{1.0}, 4.0, 2);
  McOptions serial;
  serial.workers = 1;
  McOptions parallel;
  parallel.workers = 4;
  const McEstimate a = estimate_accuracy(spec, 300000, 42, false, serial);
  const McEstimate b = estimate_accuracy(spec, 300000, 42, false, parallel);
  const McEstimate c = estimate_accuracy(spec, 300000, 42, false, parallel);
  CHECK(a.estimate == b.estimate);
  CHECK(b.estimate == c.estimate);
  CHECK(a.seed == 42);
  CHECK(a.n_samples == 300000);
  const McEstimate d = estimate_accuracy(spec, 300000, 43, false, parallel);
  CHECK(d.estimate != a.estimate);
}

TEST_CASE("same-seed estimates are scale and mean-gain invariant") {
  const McEstimate small = estimate_accuracy(make_spec(Mcp{1.0}, 4.0, 3), 100000, 9);
  const McEstimate large = estimate_accuracy(make_spec(Mcp{500.0}, 4.0, 3), 100000, 9);
  CHECK(small.estimate == large.estimate);

  ClusterSpec unit = make_spec(Tcp{2.0}, 4.0, 2, 2.0);
  ClusterSpec bright = unit;
  bright.fading.omega = 37.0;
  CHECK(estimate_accuracy(unit, 100000, 10).estimate ==
        estimate_accuracy(bright, 100000, 10).estimate);
}

TEST_CASE("permutation distribution is complete and consistent") {
  const ClusterSpec spec = make_spec(Mcp{1.0}, 4.0, 3);
  const std::uint64_t n = 1 << 17;
  const auto dist = estimate_permutation_distribution(spec, n, 77);
  REQUIRE(dist.size() == 6);
  double sum = 0.0;
  for (const auto& [perm, p] : dist) {
    CHECK(p >= 0.0);
    sum += p;
  }
  CHECK(sum == 1.0);
  const McEstimate mc = estimate_accuracy(spec, n, 77);
  CHECK(dist.at({1, 2, 3}) == mc.estimate);
  // The identity ordering dominates when ranking mostly works.
  for (const auto& [perm, p] : dist)
    if (!(perm == std::vector<int>{1, 2, 3})) CHECK(dist.at({1, 2, 3}) > p);
}

TEST_CASE("degenerate equal distances make every ordering equally likely") {
  ClusterSpec spec = make_spec(Mcp{1.0}, 4.0, 3);
  spec.fixed_distances = {1.0, 1.0, 1.0};
  const std::uint64_t n = 1 << 18;
  const auto dist = estimate_permutation_distribution(spec, n, 78);
  const double sigma = std::sqrt((1.0 / 6.0) * (5.0 / 6.0) / static_cast<double>(n));
  for (const auto& [perm, p] : dist) {
    CAPTURE(perm[0]);
    CHECK(std::abs(p - 1.0 / 6.0) <= 3.0 * sigma);
  }
}

TEST_CASE("voronoi ground truth stays close to the fitted-density estimate") {
  const ClusterSpec spec = make_spec(PppVoronoi{1.0}, 4.0, 2);
  const McEstimate truth = estimate_accuracy(spec, 20000, 55, true);
  const McEstimate fitted = estimate_accuracy(spec, 200000, 56);
  CHECK(std::abs(truth.estimate - fitted.estimate) < 0.03);
  const McEstimate again = estimate_accuracy(spec, 20000, 55, true);
  CHECK(truth.estimate == again.estimate);
}
