// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "noma/errors.hpp"
#include "noma/rng.hpp"

namespace noma {

enum class Method { series, quadrature_2f1, tensor_quadrature, monte_carlo };

std::string method_name(Method method);

// Value of an analytic evaluator together with an honest error bound and the
// method that produced it.
struct Estimate {
  double value = 0.0;
  double error_bound = 0.0;
  Method method = Method::series;
};

// Gauss-Legendre rule mapped to (0,1): nodes strictly increasing, weights
// positive and summing to 1.
struct QuadratureRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Rule of the given order, 1 <= n <= 128.
QuadratureRule gauss_legendre_unit(int n);

// Tensor-product integral of f over the open unit cube (0,1)^dim, dim in
// 1..4. A non-finite integrand value aborts with the offending node in the
// error message.
double tensor_integrate(const std::function<double(std::span<const double>)>& f,
                        int dim, const QuadratureRule& rule);

namespace detail {
// Same as tensor_integrate without the public dimension cap.
double tensor_integrate_impl(
    const std::function<double(std::span<const double>)>& f, int dim,
    const QuadratureRule& rule);
}  // namespace detail

// Gauss hypergeometric function 2F1(a,b;c;z) for z <= 1/2. Direct series on
// [0,1/2], Pfaff transformation for z < 0.
double hyp2f1(double a, double b, double c, double z);

// Accelerated sum of the alternating series sum_k term(k), where term(k)
// carries its sign. Terms must eventually alternate with decaying magnitude.
Estimate alternating_series_sum(
    const std::function<double(std::uint64_t)>& term, double tol);

// log Gamma(x) for x > 0.
double ln_gamma(double x);

// Nakagami-m channel power: gamma with shape m and mean omega; m = 1 is
// Rayleigh fading.
struct FadingModel {
  double m = 1.0;
  double omega = 1.0;
};

void validate(const FadingModel& fading);

// One gamma(shape m, mean omega) draw via the Marsaglia-Tsang method.
double sample_gamma(const FadingModel& fading, rng::Engine& g);

}  // namespace noma
