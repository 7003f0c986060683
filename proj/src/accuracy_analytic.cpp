// SPDX-License-Identifier: Apache-2.0
#include "noma/accuracy_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "noma/accuracy_mc.hpp"

namespace noma {

namespace {

bool bounded_support(const DistanceModel& model) {
  return std::holds_alternative<Mcp>(model);
}

const QuadratureRule& rule30() {
  static const QuadratureRule r = gauss_legendre_unit(30);
  return r;
}

const QuadratureRule& rule20() {
  static const QuadratureRule r = gauss_legendre_unit(20);
  return r;
}

// Composite quadrature over (0,1) split into equal panels.
double composite_unit(const std::function<double(double)>& f, int panels,
                      const QuadratureRule& rule) {
  const double h = 1.0 / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    for (int i = 0; i < rule.order; ++i) {
      const double v = f((p + rule.nodes[i]) * h);
      if (!std::isfinite(v)) throw numerical_error("composite quadrature: non-finite integrand");
      acc += rule.weights[i] * h * v;
    }
  }
  return acc;
}

// Ranking kernel prod_{i=2}^{n} 1/(1 + sum_{j<i} prod_{k=j}^{i-1} v_k^alpha)
// in the distance ratios v_k = r_k / r_{k+1}; va holds v_k^alpha.
double rayleigh_ratio_kernel(std::span<const double> va, int n) {
  double prod = 1.0;
  for (int i = 2; i <= n; ++i) {
    double s = 0.0, p = 1.0;
    for (int j = i - 1; j >= 1; --j) {
      p *= va[j - 1];
      s += p;
    }
    prod /= 1.0 + s;
  }
  return prod;
}

// P(h_near rho^{-alpha} > h_far | distance ratio rho) for Nakagami-m gains;
// reduces to 1/(1+rho^alpha) at m = 1.
double nakagami_pair_kernel(double rho, double alpha, double m) {
  const double pref = std::exp(ln_gamma(2.0 * m) - ln_gamma(m) - ln_gamma(m + 1.0));
  const double beta_mm = std::exp(2.0 * ln_gamma(m) - ln_gamma(2.0 * m));
  const double ra = std::pow(rho, alpha);
  return pref * (m * beta_mm - std::pow(rho, alpha * m) * hyp2f1(2.0 * m, m, m + 1.0, -ra));
}

double logsumexp3(double a, double b, double c) {
  const double mx = std::max({a, b, c});
  return mx + std::log(std::exp(a - mx) + std::exp(b - mx) + std::exp(c - mx));
}

double factorial(int n) { return std::exp(ln_gamma(n + 1.0)); }

// Random-selection Rayleigh integrand over the (n-1)-cube of consecutive
// distance ratios; the absolute scale integrates out for all three models.
double rayleigh_general_value(const DistanceModel& model, double alpha, int n,
                              const QuadratureRule& rule) {
  const bool mcp = bounded_support(model);
  const int d = n - 1;
  const double pref = mcp ? factorial(n - 1) * std::pow(2.0, n - 1)
                          : factorial(n) * factorial(n - 1) * std::pow(2.0, n - 1);
  std::vector<double> va(d);
  auto integrand = [&](std::span<const double> v) {
    for (int j = 0; j < d; ++j) va[j] = std::pow(v[j], alpha);
    double f = rayleigh_ratio_kernel(va, n);
    for (int j = 0; j < d; ++j) f *= std::pow(v[j], 2.0 * (j + 1) - 1.0);
    if (!mcp) {
      double q = 1.0, p = 1.0;
      for (int j = d - 1; j >= 0; --j) {
        p *= v[j] * v[j];
        q += p;
      }
      f /= std::pow(q, n);
    }
    return pref * f;
  };
  return detail::tensor_integrate_impl(integrand, d, rule);
}

double nakagami_3ue_value(const DistanceModel& model, double alpha, double m,
                          const QuadratureRule& rule) {
  const bool mcp = bounded_support(model);
  const double ln_pref =
      std::log(mcp ? 8.0 : 48.0) + ln_gamma(3.0 * m) - 3.0 * ln_gamma(m);
  // Substituted coordinates z1 = t^3, z2 = s^3 flatten the boundary layers of
  // the ordered-gain integral; the integrand is assembled in log space so the
  // (..)^{3m} denominator cannot underflow to zero.
  auto integrand = [&](std::span<const double> x) {
    const double u1 = x[0], u2 = x[1], t = x[2], s = x[3];
    const double lu1 = std::log(u1), lu2 = std::log(u2);
    const double lt = std::log(t), ls = std::log(s);
    const double den = logsumexp3(alpha * (lu1 + lu2), alpha * lu2 + 3.0 * lt,
                                  3.0 * (lt + ls));
    double lf = std::log(9.0) + (1.0 + alpha * m) * lu1 + (3.0 + 2.0 * alpha * m) * lu2 +
                (6.0 * m - 1.0) * lt + (3.0 * m - 1.0) * ls - 3.0 * m * den;
    if (!mcp) {
      const double q = 1.0 + u2 * u2 + u1 * u1 * u2 * u2;
      lf -= 3.0 * std::log(q);
    }
    return std::exp(ln_pref + lf);
  };
  return detail::tensor_integrate_impl(integrand, 4, rule);
}

struct RankGaps {
  std::vector<double> g;  // g[0..n], counts of unselected users between ranks
  double ln_c = 0.0;      // log of M! / prod g_j!
};

RankGaps make_gaps(const Pairing& pairing) {
  const int n = static_cast<int>(pairing.ranks.size());
  RankGaps out;
  out.g.resize(n + 1);
  out.g[0] = pairing.ranks.front() - 1.0;
  for (int i = 1; i < n; ++i) out.g[i] = pairing.ranks[i] - pairing.ranks[i - 1] - 1.0;
  out.g[n] = pairing.pool_size - pairing.ranks.back();
  out.ln_c = ln_gamma(pairing.pool_size + 1.0);
  for (double gj : out.g) out.ln_c -= ln_gamma(gj + 1.0);
  return out;
}

// Rank-selected Rayleigh/Nakagami integrand. MCP integrates the n ratio-and-
// scale coordinates directly; PPP/TCP integrates n-1 ratios plus the CDF
// level y of the outermost selected user.
double pairing_value(const ClusterSpec& spec, const QuadratureRule& rule) {
  const Pairing& pairing = *spec.pairing;
  const int n = spec.n_users;
  const double alpha = spec.alpha;
  const double m = spec.fading.m;
  const bool mcp = bounded_support(spec.model);
  const RankGaps gaps = make_gaps(pairing);
  const int n_ratios = n - 1;
  std::vector<double> va(n_ratios), suffix(n + 1);

  auto kernel = [&](std::span<const double> v) {
    if (n_ratios == 0) return 1.0;
    if (m == 1.0) {
      for (int j = 0; j < n_ratios; ++j) va[j] = std::pow(v[j], alpha);
      return rayleigh_ratio_kernel(va, n);
    }
    return nakagami_pair_kernel(v[0], alpha, m);
  };

  if (mcp) {
    auto integrand = [&](std::span<const double> v) {
      double f = std::exp(gaps.ln_c) * std::pow(2.0, n) * kernel(v);
      for (int j = 0; j < n; ++j) f *= std::pow(v[j], 2.0 * (j + 1) - 1.0);
      // suffix[i] = F(x_i) = prod_{j=i..n} v_j^2 under the uniform-disk CDF
      double acc = 1.0;
      for (int i = n; i >= 1; --i) {
        acc *= v[i - 1] * v[i - 1];
        suffix[i] = acc;
      }
      f *= std::pow(suffix[1], gaps.g[0]);
      for (int i = 2; i <= n; ++i)
        f *= std::pow(suffix[i] * (1.0 - v[i - 2] * v[i - 2]), gaps.g[i - 1]);
      f *= std::pow(1.0 - suffix[n], gaps.g[n]);
      return f;
    };
    return detail::tensor_integrate_impl(integrand, n, rule);
  }

  auto integrand = [&](std::span<const double> x) {
    const double y = x[n - 1];
    const double one_minus_y = 1.0 - y;
    const double t = -std::log1p(-y);
    // rho_i = prod_{j=i..n-1} v_j, rho_n = 1; Q = sum rho_i^2
    suffix[n] = 1.0;
    double q = 1.0;
    for (int i = n - 1; i >= 1; --i) {
      suffix[i] = suffix[i + 1] * x[i - 1];
      q += suffix[i] * suffix[i];
    }
    double f = std::exp(gaps.ln_c) * std::pow(2.0, n - 1) * std::pow(t, n - 1.0) *
               std::pow(one_minus_y, q - 1.0) * kernel(x.first(n_ratios));
    for (int j = 0; j < n_ratios; ++j) f *= std::pow(x[j], 2.0 * (j + 1) - 1.0);
    f *= std::pow(1.0 - std::pow(one_minus_y, suffix[1] * suffix[1]), gaps.g[0]);
    for (int i = 2; i <= n; ++i) {
      // F(x_i) - F(x_{i-1}) with F(x_i) = 1 - (1-y)^{rho_i^2}
      const double df = std::pow(one_minus_y, suffix[i - 1] * suffix[i - 1]) -
                        std::pow(one_minus_y, suffix[i] * suffix[i]);
      f *= std::pow(df, gaps.g[i - 1]);
    }
    f *= std::pow(one_minus_y, gaps.g[n]);
    return f;
  };
  return detail::tensor_integrate_impl(integrand, n, rule);
}

Estimate quadrature_pair(double v30, double v20, Method method) {
  return {v30, std::abs(v30 - v20) + 1e-12, method};
}

void require_alpha(double alpha) {
  if (!(alpha > 2.0) || !std::isfinite(alpha))
    throw parameter_error("path-loss exponent must satisfy alpha > 2");
}

}  // namespace

void validate(const ClusterSpec& spec) {
  validate(spec.model);
  validate(spec.fading);
  if (!(spec.alpha > 2.0) || !std::isfinite(spec.alpha))
    throw parameter_error("path-loss exponent must satisfy alpha > 2");
  if (spec.n_users < 1) throw parameter_error("cluster size must be >= 1");
  if (spec.pairing) {
    const Pairing& p = *spec.pairing;
    if (static_cast<int>(p.ranks.size()) != spec.n_users)
      throw parameter_error("pairing rank count must equal the cluster size");
    if (p.pool_size < spec.n_users)
      throw parameter_error("pairing pool must hold at least the cluster size");
    int prev = 0;
    for (int r : p.ranks) {
      if (r <= prev || r > p.pool_size)
        throw parameter_error("pairing ranks must be strictly ascending within the pool");
      prev = r;
    }
  }
  if (!spec.fixed_distances.empty()) {
    if (static_cast<int>(spec.fixed_distances.size()) != spec.n_users)
      throw parameter_error("fixed distance count must equal the cluster size");
    double prev = 0.0;
    for (double r : spec.fixed_distances) {
      if (!(r > 0.0) || !std::isfinite(r) || r < prev)
        throw parameter_error("fixed distances must be positive and ascending");
      prev = r;
    }
  }
}

double inner_expectation_rayleigh(const OrderedDistances& distances, double alpha) {
  const std::size_t n = distances.values.size();
  if (n < 1) throw parameter_error("need at least one distance");
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw parameter_error("path-loss exponent must be positive");
  double prev = 0.0;
  for (double r : distances.values) {
    if (!(r > 0.0) || r < prev) throw parameter_error("distances must be positive and ascending");
    prev = r;
  }
  double prod = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j <= i; ++j)
      s += std::pow(distances.values[j] / distances.values[i], alpha);
    prod /= s;
  }
  return prod;
}

Estimate accuracy_rayleigh_2ue(const DistanceModel& model, double alpha) {
  validate(model);
  if (!(alpha >= 2.0) || !std::isfinite(alpha))
    throw parameter_error("path-loss exponent must satisfy alpha >= 2");
  if (bounded_support(model)) {
    return alternating_series_sum(
        [alpha](std::uint64_t k) {
          const double sign = (k & 1) ? -1.0 : 1.0;
          return sign * 2.0 / (2.0 + alpha * k);
        },
        1e-8);
  }
  return alternating_series_sum(
      [alpha](std::uint64_t k) {
        const double sign = (k & 1) ? -1.0 : 1.0;
        return sign / (alpha * k + 2.0) * hyp2f1(2.0, 1.0, alpha * k / 2.0 + 2.0, 0.5);
      },
      1e-8);
}

Estimate accuracy_rayleigh_3ue(const DistanceModel& model, double alpha) {
  return accuracy_rayleigh_general(model, alpha, 3);
}

Estimate accuracy_rayleigh_general(const DistanceModel& model, double alpha, int n_users) {
  validate(model);
  require_alpha(alpha);
  if (n_users < 2 || n_users > 6)
    throw parameter_error("general Rayleigh evaluator supports 2..6 users");
  const double v30 = rayleigh_general_value(model, alpha, n_users, rule30());
  const double v20 = rayleigh_general_value(model, alpha, n_users, rule20());
  return quadrature_pair(v30, v20, Method::tensor_quadrature);
}

Estimate accuracy_nakagami_2ue(const DistanceModel& model, double alpha, double m) {
  validate(model);
  require_alpha(alpha);
  validate(FadingModel{m, 1.0});
  const bool mcp = bounded_support(model);
  const double pref =
      (mcp ? 2.0 : 4.0) * std::exp(ln_gamma(2.0 * m) - ln_gamma(m) - ln_gamma(m + 1.0));
  const double beta_mm = std::exp(2.0 * ln_gamma(m) - ln_gamma(2.0 * m));
  auto f = [&](double u) {
    const double ua = std::pow(u, alpha);
    double g = m * beta_mm * u -
               std::pow(u, 1.0 + alpha * m) * hyp2f1(2.0 * m, m, m + 1.0, -ua);
    if (!mcp) {
      const double w = 1.0 + u * u;
      g /= w * w;
    }
    return pref * g;
  };
  const double v4 = composite_unit(f, 4, rule30());
  const double v2 = composite_unit(f, 2, rule30());
  return quadrature_pair(v4, v2, Method::quadrature_2f1);
}

Estimate accuracy_nakagami_3ue(const DistanceModel& model, double alpha, double m) {
  validate(model);
  require_alpha(alpha);
  validate(FadingModel{m, 1.0});
  const double v30 = nakagami_3ue_value(model, alpha, m, rule30());
  const double v20 = nakagami_3ue_value(model, alpha, m, rule20());
  return quadrature_pair(v30, v20, Method::tensor_quadrature);
}

Estimate accuracy_pairing_rayleigh_2ue(const DistanceModel& model, double alpha,
                                       int pool_size) {
  if (pool_size < 2) throw parameter_error("pairing pool must hold at least 2 users");
  ClusterSpec spec;
  spec.model = model;
  spec.alpha = alpha;
  spec.n_users = 2;
  spec.pairing = Pairing{pool_size, {1, pool_size}};
  return accuracy_pairing_general(spec);
}

Estimate accuracy_pairing_general(const ClusterSpec& spec) {
  validate(spec);
  if (!spec.pairing) throw parameter_error("pairing evaluator requires a pairing");
  require_alpha(spec.alpha);
  const bool rayleigh = spec.fading.m == 1.0;
  const bool tractable = (rayleigh && spec.n_users <= 4) || (!rayleigh && spec.n_users == 2);
  if (!tractable) {
    const McEstimate mc =
        estimate_accuracy(spec, 1u << 21, 0x9e3779b97f4a7c15ULL);
    return {mc.estimate, 3.0 * mc.stderr_, Method::monte_carlo};
  }
  const double v30 = pairing_value(spec, rule30());
  const double v20 = pairing_value(spec, rule20());
  return quadrature_pair(v30, v20, Method::tensor_quadrature);
}

Estimate accuracy_analytic(const ClusterSpec& spec) {
  validate(spec);
  if (!spec.fixed_distances.empty())
    throw parameter_error("analytic evaluators require random distances");
  if (spec.pairing) return accuracy_pairing_general(spec);
  if (spec.n_users < 2)
    throw parameter_error("analytic evaluators require at least 2 users");
  if (spec.fading.m == 1.0) {
    if (spec.n_users == 2) return accuracy_rayleigh_2ue(spec.model, spec.alpha);
    if (spec.n_users == 3) return accuracy_rayleigh_3ue(spec.model, spec.alpha);
    return accuracy_rayleigh_general(spec.model, spec.alpha, spec.n_users);
  }
  if (spec.n_users == 2) return accuracy_nakagami_2ue(spec.model, spec.alpha, spec.fading.m);
  if (spec.n_users == 3) return accuracy_nakagami_3ue(spec.model, spec.alpha, spec.fading.m);
  throw parameter_error("no analytic Nakagami evaluator beyond 3 users; use the Monte Carlo path");
}

}  // namespace noma
