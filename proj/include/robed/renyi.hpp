// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "robed/core.hpp"

namespace robed {

/// Multivariate Gaussian with an SPD covariance. Construction verifies
/// symmetry (1e-10) and positive definiteness via Cholesky.
struct GaussianDist {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  GaussianDist(Eigen::VectorXd mean_in, Eigen::MatrixXd cov_in);

  Eigen::Index dim() const { return mean.size(); }
};

/// Beta distribution with positive shapes (delta, gamma).
struct BetaDist {
  double delta;
  double gamma;

  BetaDist(double delta_in, double gamma_in);

  double mean() const { return delta / (delta + gamma); }
};

/// Renyi divergence D_alpha[q || p] between Gaussians. alpha = 1 dispatches
/// to the KL limit, alpha -> 0 returns 0; no extrapolation beyond (0, 1].
double renyi_gaussian(const GaussianDist& q, const GaussianDist& p,
                      const Order& order);

/// Renyi divergence D_alpha[q || p] between Beta distributions, via
/// log-Gamma only. Throws if the geometric-mixture shapes degenerate.
double renyi_beta(const BetaDist& q, const BetaDist& p, const Order& order);

/// Shannon-limit references.
double kl_gaussian(const GaussianDist& q, const GaussianDist& p);
double kl_beta(const BetaDist& q, const BetaDist& p);

/// log B(a, b) through lgamma; shared by the Beta-Binomial module.
double log_beta_fn(double a, double b);

}  // namespace robed
