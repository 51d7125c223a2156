// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "robed/core.hpp"

namespace robed {

/// Categorical policy over a fixed design support, stored in log space.
struct DiscretePolicy {
  std::vector<Eigen::VectorXd> support;
  Eigen::VectorXd log_probs;

  DiscretePolicy(std::vector<Eigen::VectorXd> support_in,
                 Eigen::VectorXd log_probs_in);

  static DiscretePolicy uniform(std::vector<Eigen::VectorXd> support_in);

  std::size_t size() const { return support.size(); }
};

/// Diagonal Gaussian policy over a box; samples are clipped to the box at
/// evaluation time.
struct BoxedGaussianPolicy {
  Eigen::VectorXd mean;
  Eigen::VectorXd log_std;
  Eigen::VectorXd box_lo;
  Eigen::VectorXd box_hi;

  BoxedGaussianPolicy(Eigen::VectorXd mean_in, Eigen::VectorXd log_std_in,
                      Eigen::VectorXd lo, Eigen::VectorXd hi);

  Eigen::Index dim() const { return mean.size(); }
  Eigen::VectorXd sample(Rng& rng) const;          // raw Gaussian draw
  Eigen::VectorXd clip(const Eigen::VectorXd& x) const;
};

/// Precision, confidence and regularity inputs of the lower bound.
struct PacConfig {
  double lambda;
  double delta;
  RegularityConstants constants;

  PacConfig(double lambda_in, double delta_in, RegularityConstants c = {});
};

/// Exact maximizer of the KL-regularized objective: log probabilities
/// shifted by lambda * estimates and renormalized.
DiscretePolicy gibbs_update(const DiscretePolicy& prior,
                            const Eigen::VectorXd& estimates, double lambda);

/// E_pi[estimates] - KL(pi || prior) / lambda.
double pac_objective(const DiscretePolicy& policy,
                     const Eigen::VectorXd& estimates,
                     const DiscretePolicy& prior, double lambda);

/// High-probability lower bound on the expected gain under the policy:
/// empirical mean minus the concentration and KL penalties.
double pac_lower_bound(double empirical_mean, double kl,
                       const PacConfig& config, int outer_n);

double kl_policies(const DiscretePolicy& a, const DiscretePolicy& b);
double kl_policies(const BoxedGaussianPolicy& a, const BoxedGaussianPolicy& b);

/// Noisy design-value oracle; deterministic given the seed.
using DesignOracle = std::function<double(const Eigen::VectorXd&, Seed)>;

struct MirrorDescentOptions {
  int steps = 200;
  int batch = 32;
  double mean_step = 0.05;
  double log_std_step = 0.01;
  /// Step sizes decay linearly to this fraction of their initial value by
  /// the final step; 1 keeps them constant.
  double final_step_scale = 1.0;
  /// Share one oracle seed across the batch of a step, so advantages
  /// reflect design differences rather than independent estimator noise.
  bool common_random_numbers = true;
  /// Invoked after every update; used by diagnostics and invariant tests.
  std::function<void(int, const BoxedGaussianPolicy&)> on_step;
};

/// Score-function ascent on E_pi[objective] - KL(pi || prior) / lambda with
/// a mean baseline; the mean is projected to the box and the standard
/// deviations clamped to (0, box width] after every step.
BoxedGaussianPolicy mirror_descent(const DesignOracle& objective,
                                   const BoxedGaussianPolicy& prior,
                                   const PacConfig& config,
                                   const MirrorDescentOptions& options,
                                   Seed seed);

}  // namespace robed
