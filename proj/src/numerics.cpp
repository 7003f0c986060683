// SPDX-License-Identifier: Apache-2.0
#include "noma/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace noma {

std::string method_name(Method method) {
  switch (method) {
    case Method::series: return "series";
    case Method::quadrature_2f1: return "quadrature-2F1";
    case Method::tensor_quadrature: return "tensor-quadrature";
    case Method::monte_carlo: return "monte-carlo";
  }
  throw parameter_error("unknown method tag");
}

QuadratureRule gauss_legendre_unit(int n) {
  if (n < 1 || n > 128) throw parameter_error("quadrature order must be in [1, 128]");
  QuadratureRule rule;
  rule.order = n;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Root of the Legendre polynomial P_n on (-1,1), found by Newton
    // iteration from the Chebyshev-based initial guess.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (z * p1 - p0) / (z * z - 1.0);
      const double step = p1 / pp;
      z -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const double w = 1.0 / ((1.0 - z * z) * pp * pp);
    rule.nodes[i] = 0.5 * (1.0 - z);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + z);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

namespace detail {

double tensor_integrate_impl(
    const std::function<double(std::span<const double>)>& f, int dim,
    const QuadratureRule& rule) {
  if (dim < 1) throw parameter_error("tensor_integrate dimension must be >= 1");
  if (rule.order < 1 || rule.nodes.size() != static_cast<std::size_t>(rule.order) ||
      rule.weights.size() != static_cast<std::size_t>(rule.order))
    throw parameter_error("malformed quadrature rule");
  const int n = rule.order;
  std::vector<int> idx(dim, 0);
  std::vector<double> x(dim);
  double acc = 0.0;
  for (;;) {
    double w = 1.0;
    for (int d = 0; d < dim; ++d) {
      x[d] = rule.nodes[idx[d]];
      w *= rule.weights[idx[d]];
    }
    const double v = f(std::span<const double>(x.data(), dim));
    if (!std::isfinite(v)) {
      std::string where = "tensor_integrate: non-finite integrand at node (";
      char buf[32];
      for (int d = 0; d < dim; ++d) {
        std::snprintf(buf, sizeof buf, "%s%.17g", d ? ", " : "", x[d]);
        where += buf;
      }
      where += ")";
      throw numerical_error(where);
    }
    acc += w * v;
    int d = 0;
    while (d < dim && ++idx[d] == n) idx[d++] = 0;
    if (d == dim) break;
  }
  return acc;
}

}  // namespace detail

double tensor_integrate(const std::function<double(std::span<const double>)>& f,
                        int dim, const QuadratureRule& rule) {
  if (dim < 1 || dim > 4) throw parameter_error("tensor_integrate supports dimensions 1..4");
  return detail::tensor_integrate_impl(f, dim, rule);
}

namespace {

// Power series sum_k (a)_k (b)_k / ((c)_k k!) z^k, absolutely convergent for
// |z| < 1 and terminating when a or b is a nonpositive integer.
double gauss_series(double a, double b, double c, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (std::uint64_t k = 0; k < 2'000'000; ++k) {
    const double kk = static_cast<double>(k);
    term *= (a + kk) * (b + kk) / ((c + kk) * (1.0 + kk)) * z;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) + 1e-300) return sum;
  }
  throw numerical_error("hyp2f1 series did not converge within 2e6 terms");
}

}  // namespace

double hyp2f1(double a, double b, double c, double z) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(z))
    throw domain_error("hyp2f1 requires finite arguments");
  if (c <= 0.0 && c == std::floor(c))
    throw domain_error("hyp2f1 undefined: c is a nonpositive integer");
  if (z > 0.5) throw domain_error("hyp2f1 supports z <= 1/2");
  if (z == 0.0) return 1.0;
  if (z > 0.0) return gauss_series(a, b, c, z);
  // Pfaff transformation: keeps the smaller of a, b in the transformed
  // series and maps z < 0 into (0,1) where the series converges.
  const double w = z / (z - 1.0);
  if (a >= b) return std::pow(1.0 - z, -b) * gauss_series(c - a, b, c, w);
  return std::pow(1.0 - z, -a) * gauss_series(c - b, a, c, w);
}

Estimate alternating_series_sum(
    const std::function<double(std::uint64_t)>& term, double tol) {
  if (!(tol > 0.0)) throw parameter_error("tolerance must be positive");
  constexpr std::size_t kMaxDepth = 31;
  constexpr std::uint64_t kMaxTerms = 1'000'000;
  std::vector<double> diag;
  diag.reserve(kMaxDepth);
  double partial = 0.0;
  double prev_est = std::numeric_limits<double>::quiet_NaN();
  int calm = 0;
  for (std::uint64_t k = 0; k < kMaxTerms; ++k) {
    const double t = term(k);
    if (!std::isfinite(t)) throw numerical_error("alternating series term is not finite");
    partial += t;
    // Repeated-averaging table (van Wijngaarden): each new partial sum
    // extends the diagonal, capped in depth; the deepest entry is the
    // accelerated estimate.
    std::vector<double> next(std::min(diag.size() + 1, kMaxDepth));
    next[0] = partial;
    for (std::size_t j = 1; j < next.size(); ++j) next[j] = 0.5 * (next[j - 1] + diag[j - 1]);
    diag.swap(next);
    const double est = diag.back();
    if (k >= 3) {
      const double bound =
          4.0 * std::abs(est - prev_est) + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(est);
      calm = (bound <= tol) ? calm + 1 : 0;
      if (calm >= 2) return {est, bound, Method::series};
    }
    prev_est = est;
  }
  throw numerical_error("alternating series did not converge within 1e6 terms");
}

double ln_gamma(double x) {
  if (!(x > 0.0)) throw domain_error("ln_gamma requires x > 0");
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

void validate(const FadingModel& fading) {
  if (!(fading.m >= 0.5) || !std::isfinite(fading.m))
    throw parameter_error("Nakagami shape m must be >= 0.5");
  if (!(fading.omega > 0.0) || !std::isfinite(fading.omega))
    throw parameter_error("mean channel power omega must be positive");
}

double sample_gamma(const FadingModel& fading, rng::Engine& g) {
  validate(fading);
  const double scale = fading.omega / fading.m;
  double shape = fading.m;
  double boost = 1.0;
  if (shape < 1.0) {
    boost = std::pow(rng::uniform01(g), 1.0 / shape);
    shape += 1.0;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    const double x = rng::normal(g);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng::uniform01(g);
    if (u < 1.0 - 0.0331 * x * x * x * x) return boost * scale * d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return boost * scale * d * v;
  }
}

}  // namespace noma
