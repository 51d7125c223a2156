// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference computations: quadrature-based divergences and
// brute-force information gains, independent of the library paths they
// check.

#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "robed/abtest.hpp"
#include "robed/core.hpp"
#include "robed/renyi.hpp"

namespace oracles {

/// Unit-interval quadrature tolerant of integrable endpoint singularities
/// (Beta densities with shapes below one). The domain is truncated a hair
/// inside the endpoints; for shapes >= 0.5 the removed mass is below 1e-9,
/// well inside every tolerance the oracles serve.
inline double quad(const std::function<double(double)>& f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, a + 1e-12, b - 1e-12, 1e-12);
}

inline double gaussian_pdf(double x, double mean, double var) {
  const double r = x - mean;
  return std::exp(-0.5 * r * r / var) / std::sqrt(2.0 * M_PI * var);
}

inline double log_beta_pdf(double t, double a, double b) {
  double lp = -robed::log_beta_fn(a, b);
  if (a != 1.0) lp += (a - 1.0) * std::log(t);
  if (b != 1.0) lp += (b - 1.0) * std::log1p(-t);
  return lp;
}

inline double beta_pdf(double t, double a, double b) {
  return std::exp(log_beta_pdf(t, a, b));
}

inline double log_binom_pmf(int x, int n, double t) {
  const double lc = std::lgamma(n + 1.0) - std::lgamma(x + 1.0) -
                    std::lgamma(n - x + 1.0);
  double lp = lc;
  if (x > 0) lp += x * std::log(t);
  if (n - x > 0) lp += (n - x) * std::log1p(-t);
  return lp;
}

inline double binom_pmf(int x, int n, double t) {
  return std::exp(log_binom_pmf(x, n, t));
}

/// (1/(alpha-1)) log integral of q^alpha p^(1-alpha) for 1-D Gaussians.
inline double renyi_gaussian_quadrature(double mq, double vq, double mp,
                                        double vp, double alpha) {
  const double inf = std::numeric_limits<double>::infinity();
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double x) {
        return std::pow(gaussian_pdf(x, mq, vq), alpha) *
               std::pow(gaussian_pdf(x, mp, vp), 1.0 - alpha);
      },
      -inf, inf, 12, 1e-12);
  return std::log(integral) / (alpha - 1.0);
}

inline double renyi_beta_quadrature(const robed::BetaDist& q,
                                    const robed::BetaDist& p, double alpha) {
  const double integral = quad(
      [&](double t) {
        if (t <= 0.0 || t >= 1.0) return 0.0;
        return std::exp(alpha * log_beta_pdf(t, q.delta, q.gamma) +
                        (1.0 - alpha) * log_beta_pdf(t, p.delta, p.gamma));
      },
      0.0, 1.0);
  return std::log(integral) / (alpha - 1.0);
}

inline double kl_gaussian_quadrature(double mq, double vq, double mp, double vp) {
  const double inf = std::numeric_limits<double>::infinity();
  const auto log_pdf = [](double x, double m, double v) {
    const double r = x - m;
    return -0.5 * (std::log(2.0 * M_PI * v) + r * r / v);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double x) {
        const double lq = log_pdf(x, mq, vq);
        return std::exp(lq) * (lq - log_pdf(x, mp, vp));
      },
      -inf, inf, 12, 1e-12);
}

inline double kl_beta_quadrature(const robed::BetaDist& q,
                                 const robed::BetaDist& p) {
  return quad(
      [&](double t) {
        if (t <= 0.0 || t >= 1.0) return 0.0;
        const double fq = beta_pdf(t, q.delta, q.gamma);
        if (fq <= 0.0) return 0.0;  // x log x -> 0 at the endpoints
        return fq * (std::log(fq) - std::log(beta_pdf(t, p.delta, p.gamma)));
      },
      0.0, 1.0);
}

/// E_prior[p(x | theta)^alpha] for one Beta-Binomial group, by quadrature.
inline double group_powered_evidence(const robed::BetaDist& prior, int n,
                                     int x, double alpha) {
  return quad(
      [&](double t) {
        if (t <= 0.0 || t >= 1.0) return 0.0;
        return std::exp(log_beta_pdf(t, prior.delta, prior.gamma) +
                        alpha * log_binom_pmf(x, n, t));
      },
      0.0, 1.0);
}

/// Brute-force Sibson alpha-MI for the two-group model: exhaustive outcome
/// enumeration with the inner expectation integrated numerically.
inline double abtest_sibson_bruteforce(const robed::ABModel& model,
                                       const robed::Allocation& alloc,
                                       double alpha) {
  double total = 0.0;
  const robed::BetaDist priors[2] = {model.prior_a, model.prior_b};
  const int counts[2] = {alloc.n_a, alloc.n_b};
  for (int k = 0; k < 2; ++k) {
    if (counts[k] == 0) continue;
    double sum = 0.0;
    for (int x = 0; x <= counts[k]; ++x) {
      sum += std::pow(group_powered_evidence(priors[k], counts[k], x, alpha),
                      1.0 / alpha);
    }
    total += alpha / (alpha - 1.0) * std::log(sum);
  }
  return total;
}

/// Shannon EIG by the likelihood-divergence representation:
/// E_theta[KL(p(x | theta) || p(x))], per group, theta integrated.
inline double abtest_shannon_lklhd_div(const robed::ABModel& model,
                                       const robed::Allocation& alloc) {
  double total = 0.0;
  const robed::BetaDist priors[2] = {model.prior_a, model.prior_b};
  const int counts[2] = {alloc.n_a, alloc.n_b};
  for (int k = 0; k < 2; ++k) {
    const int n = counts[k];
    if (n == 0) continue;
    std::vector<double> marginal(n + 1);
    for (int x = 0; x <= n; ++x) {
      marginal[x] = group_powered_evidence(priors[k], n, x, 1.0);
    }
    total += quad(
        [&](double t) {
          if (t <= 0.0 || t >= 1.0) return 0.0;
          double div = 0.0;
          for (int x = 0; x <= n; ++x) {
            const double lik = binom_pmf(x, n, t);
            if (lik > 0.0) div += lik * (std::log(lik) - std::log(marginal[x]));
          }
          return beta_pdf(t, priors[k].delta, priors[k].gamma) * div;
        },
        0.0, 1.0);
  }
  return total;
}

}  // namespace oracles
