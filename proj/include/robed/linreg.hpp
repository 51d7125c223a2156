// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <vector>

#include "robed/core.hpp"
#include "robed/renyi.hpp"

namespace robed {

/// Row construction for the design matrix: `affine` appends a constant
/// column ([xi, 1], parameter dim = design dim + 1); `identity` uses the
/// raw design vector.
enum class FeatureMap { affine, identity };

/// Conjugate Gaussian linear regression model. Designs live in a box,
/// [-1, 1] per coordinate by default.
struct LinRegModel {
  Eigen::VectorXd prior_mean;  // mu_0, dim d
  Eigen::MatrixXd prior_cov;   // Sigma_0, d x d SPD
  double noise_var;            // sigma^2 > 0
  Eigen::VectorXd box_lo;      // per design coordinate
  Eigen::VectorXd box_hi;

  LinRegModel(Eigen::VectorXd mu0, Eigen::MatrixXd sigma0, double sigma2,
              Eigen::VectorXd lo, Eigen::VectorXd hi);

  /// Default box [-1, 1]^design_dim.
  static LinRegModel with_default_box(Eigen::VectorXd mu0,
                                      Eigen::MatrixXd sigma0, double sigma2,
                                      int design_dim);

  Eigen::Index param_dim() const { return prior_mean.size(); }
  Eigen::Index design_dim() const { return box_lo.size(); }
};

/// Batch of designs; one measurement per design. Rank deficiency of the
/// induced design matrix is legal.
struct DesignBatch {
  std::vector<Eigen::VectorXd> designs;
  FeatureMap map = FeatureMap::affine;

  std::size_t size() const { return designs.size(); }
};

/// Batch of scalar designs under the affine map (the two-parameter model).
DesignBatch scalar_batch(const std::vector<double>& xis);

/// N_b x d design matrix; row i is the feature row for design i.
/// Throws if any design lies outside the model box.
Eigen::MatrixXd design_matrix(const LinRegModel& model,
                              const DesignBatch& batch);

/// Standard conjugate posterior N(mu_N, Sigma_N).
GaussianDist posterior(const LinRegModel& model, const DesignBatch& batch,
                       const Eigen::VectorXd& outcomes);

/// Tempered update: likelihood precision scaled by alpha. Equals the
/// posterior at alpha = 1 and the prior as alpha -> 0.
GaussianDist tilted_posterior(const LinRegModel& model,
                              const DesignBatch& batch,
                              const Eigen::VectorXd& outcomes,
                              const Order& order);

/// Tilted outcome marginal N(H mu_0, alpha H Sigma_0 H^T + sigma^2 I);
/// the marginal likelihood at alpha = 1.
GaussianDist tilted_marginal(const LinRegModel& model,
                             const DesignBatch& batch, const Order& order);

/// Closed form: 0.5 log det((alpha / sigma^2) H Sigma_0 H^T + I).
double sibson_mi(const LinRegModel& model, const DesignBatch& batch,
                 const Order& order);

struct JointSample {
  Eigen::VectorXd theta;
  Eigen::VectorXd outcomes;
};

/// i.i.d. draws from the worst-case joint over (theta, x). At alpha = 1
/// this is the nominal generative process.
std::vector<JointSample> sample_worst_case(const LinRegModel& model,
                                           const DesignBatch& batch,
                                           const Order& order, int count,
                                           Seed seed);

/// Realized gain D_alpha[posterior || prior] for an observed batch.
double conditional_gain(const LinRegModel& model, const DesignBatch& batch,
                        const Eigen::VectorXd& outcomes, const Order& order);

/// Sum of predictive Gaussian log densities of held-out points under the
/// supplied (possibly tilted) parameter posterior.
double log_predictive_density(const LinRegModel& model,
                              const GaussianDist& posterior_dist,
                              const DesignBatch& test_batch,
                              const Eigen::VectorXd& test_outcomes);

}  // namespace robed
