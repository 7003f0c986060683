// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "noma/geometry.hpp"
#include "support.hpp"

using namespace noma;

TEST_CASE("model validation") {
  CHECK_NOTHROW(validate(DistanceModel{PppVoronoi{0.3}}));
  CHECK_THROWS_AS(validate(DistanceModel{PppVoronoi{0.0}}), parameter_error);
  CHECK_THROWS_AS(validate(DistanceModel{PppVoronoi{1.0, -1.0}}), parameter_error);
  CHECK_THROWS_AS(validate(DistanceModel{Mcp{0.0}}), parameter_error);
  CHECK_THROWS_AS(validate(DistanceModel{Tcp{-2.0}}), parameter_error);
}

TEST_CASE("model names") {
  CHECK(model_name(PppVoronoi{}) == "ppp");
  CHECK(model_name(Mcp{}) == "mcp");
  CHECK(model_name(Tcp{}) == "tcp");
}

TEST_CASE("pdf and cdf reference points") {
  const DistanceModel disk = Mcp{20.0};
  CHECK(pdf(disk, 10.0) == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(cdf(disk, 10.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(pdf(disk, 25.0) == 0.0);
  CHECK(cdf(disk, 25.0) == 1.0);
  CHECK(cdf(disk, 20.0) == doctest::Approx(1.0).epsilon(1e-14));

  const DistanceModel scatter = Tcp{25.0};
  const double median = 5.88705011257737;
  CHECK(cdf(scatter, median) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pdf(scatter, 5.0) ==
        doctest::Approx(5.0 / 25.0 * std::exp(-25.0 / 50.0)).epsilon(1e-13));

  const double lambda = 0.7, c = 1.25;
  const DistanceModel cell = PppVoronoi{lambda};
  const double x = std::sqrt(1.0 / (c * lambda * std::numbers::pi));
  CHECK(cdf(cell, x) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(pdf(cell, x) ==
        doctest::Approx(2.0 * c * lambda * std::numbers::pi * x * std::exp(-1.0))
            .epsilon(1e-12));

  CHECK_THROWS_AS(cdf(disk, -1.0), domain_error);
  CHECK_THROWS_AS(pdf(scatter, -0.5), domain_error);
}

TEST_CASE("sampling matches the distribution") {
  const int n = 100000;
  const double critical = 1.628 / std::sqrt(static_cast<double>(n));  // 1% level
  int stream = 0;
  for (const DistanceModel& model :
       {DistanceModel{PppVoronoi{0.8}}, DistanceModel{Mcp{7.0}}, DistanceModel{Tcp{4.0}}}) {
    rng::Engine g = rng::make_stream(31, stream++);
    std::vector<double> x(n);
    for (double& v : x) v = sample_distance(model, g);
    const double d =
        test_support::ks_statistic(x, [&](double t) { return cdf(model, t); });
    CAPTURE(model_name(model));
    CHECK(d < critical);
  }
}

TEST_CASE("inverse-CDF sampling is scale equivariant") {
  rng::Engine a = rng::make_stream(5, 0), b = rng::make_stream(5, 0);
  for (int i = 0; i < 1000; ++i) {
    const double x1 = sample_distance(Mcp{1.0}, a);
    const double x2 = sample_distance(Mcp{500.0}, b);
    CHECK(x2 == doctest::Approx(500.0 * x1).epsilon(1e-12));
  }
  a = rng::make_stream(5, 1), b = rng::make_stream(5, 1);
  for (int i = 0; i < 1000; ++i) {
    const double x1 = sample_distance(PppVoronoi{2e-3}, a);
    const double x2 = sample_distance(PppVoronoi{1.0}, b);
    CHECK(x2 == doctest::Approx(x1 / std::sqrt(500.0)).epsilon(1e-12));
  }
  a = rng::make_stream(5, 2), b = rng::make_stream(5, 2);
  for (int i = 0; i < 1000; ++i) {
    const double x1 = sample_distance(Tcp{2.0}, a);
    const double x2 = sample_distance(Tcp{2.0 * 500.0 * 500.0}, b);
    CHECK(x2 == doctest::Approx(500.0 * x1).epsilon(1e-12));
  }
}

TEST_CASE("ordered draws are ascending and inside the support") {
  rng::Engine g = rng::make_stream(13, 0);
  for (int i = 0; i < 5000; ++i) {
    const OrderedDistances od = sample_ordered(Mcp{3.0}, 4, g);
    REQUIRE(od.values.size() == 4);
    for (int k = 0; k < 4; ++k) {
      CHECK(od.values[k] > 0.0);
      CHECK(od.values[k] <= 3.0);
      if (k > 0) CHECK(od.values[k] >= od.values[k - 1]);
    }
  }
}

TEST_CASE("order statistic means match closed forms") {
  const double radius = 7.0;
  rng::Engine g = rng::make_stream(17, 0);
  double sum_single = 0.0, sum_min3 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum_single += sample_distance(Mcp{radius}, g);
  for (int i = 0; i < n; ++i) sum_min3 += sample_ordered(Mcp{radius}, 3, g).values[0];
  CHECK(sum_single / n == doctest::Approx(2.0 * radius / 3.0).epsilon(0.005));
  CHECK(sum_min3 / n == doctest::Approx(16.0 * radius / 35.0).epsilon(0.005));
}

TEST_CASE("voronoi scene associates users to the nearest base station") {
  rng::Engine g = rng::make_stream(19, 0);
  const double half_width = 4.0 / std::sqrt(std::numbers::pi);
  const VoronoiScene scene = make_voronoi_scene(1.0, 10.0, half_width, g);
  REQUIRE(!scene.bs_points.empty());
  CHECK(scene.bs_points[0].x == 0.0);
  CHECK(scene.bs_points[0].y == 0.0);
  std::vector<double> expected;
  for (const Point& u : scene.user_points) {
    double best = 1e300;
    std::size_t best_i = 0;
    for (std::size_t b = 0; b < scene.bs_points.size(); ++b) {
      const double dx = u.x - scene.bs_points[b].x, dy = u.y - scene.bs_points[b].y;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best) best = d2, best_i = b;
    }
    if (best_i == 0) expected.push_back(std::sqrt(best));
  }
  std::sort(expected.begin(), expected.end());
  std::vector<double> got = scene.typical_cell_users;
  std::sort(got.begin(), got.end());
  REQUIRE(got.size() == expected.size());
  for (std::size_t i = 0; i < got.size(); ++i)
    CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("voronoi cell simulation honors its preconditions") {
  rng::Engine g = rng::make_stream(29, 0);
  const double half_width = 4.0 / std::sqrt(std::numbers::pi);
  CHECK_THROWS_AS(simulate_voronoi_cell(1.0, 5.0, 2, half_width, g), parameter_error);
  CHECK_THROWS_AS(simulate_voronoi_cell(1.0, 10.0, 2, 0.5 * half_width, g),
                  parameter_error);
  const OrderedDistances od = simulate_voronoi_cell(1.0, 10.0, 2, half_width, g);
  REQUIRE(od.values.size() == 2);
  CHECK(od.values[0] > 0.0);
  CHECK(od.values[1] >= od.values[0]);
}

TEST_CASE("voronoi rejection stays rare") {
  const double half_width = 4.0 / std::sqrt(std::numbers::pi);
  VoronoiStats stats2{}, stats3{};
  rng::Engine g = rng::make_stream(37, 0);
  for (int i = 0; i < 1500; ++i) simulate_voronoi_cell(1.0, 10.0, 2, half_width, g, &stats2);
  CHECK(static_cast<double>(stats2.scenes_accepted) / stats2.scenes_drawn >= 0.9);
  for (int i = 0; i < 1500; ++i) simulate_voronoi_cell(1.0, 10.0, 3, half_width, g, &stats3);
  CHECK(static_cast<double>(stats3.scenes_accepted) / stats3.scenes_drawn >= 0.85);
}

TEST_CASE("fitted serving-distance density tracks the voronoi ground truth") {
  const double half_width = 4.0 / std::sqrt(std::numbers::pi);
  rng::Engine g = rng::make_stream(41, 0);
  const int n = 20000;
  std::vector<double> x(n);
  for (double& v : x) v = simulate_voronoi_cell(1.0, 10.0, 1, half_width, g).values[0];
  const DistanceModel fitted = PppVoronoi{1.0};
  const double d = test_support::ks_statistic(x, [&](double t) { return cdf(fitted, t); });
  CHECK(d < 0.02);
}
