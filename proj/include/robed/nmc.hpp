// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>
#include <vector>

#include "robed/abtest.hpp"
#include "robed/core.hpp"
#include "robed/linreg.hpp"

namespace robed {

/// Sampling and likelihood capabilities required by the nested estimator.
/// Implementations must be deterministic given the engine state.
class GenerativeModel {
 public:
  virtual ~GenerativeModel() = default;

  using VecRef = const Eigen::Ref<const Eigen::VectorXd>&;

  virtual Eigen::VectorXd sample_prior(Rng& rng) const = 0;
  virtual Eigen::VectorXd sample_outcome(VecRef theta, VecRef design,
                                         Rng& rng) const = 0;
  virtual double log_likelihood(VecRef outcome, VecRef theta,
                                VecRef design) const = 0;

  /// Fill each column of `out` with one prior draw. Overrides may batch
  /// the generation; the draws must match repeated sample_prior calls in
  /// distribution (not bitwise).
  virtual void sample_prior_batch(Rng& rng, Eigen::MatrixXd& out) const {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      out.col(j) = sample_prior(rng);
    }
  }

  /// Closed-form log marginal, when the family admits one (exact-ratio mode).
  virtual std::optional<double> log_marginal(VecRef outcome, VecRef design) const {
    (void)outcome, (void)design;
    return std::nullopt;
  }

  /// Closed-form mutual information, when available (bias diagnostics).
  virtual std::optional<double> closed_form_mi(const Eigen::VectorXd& design,
                                               const Order& order) const {
    (void)design, (void)order;
    return std::nullopt;
  }
};

/// Sample budgets for the nested estimator. The contrastive set reuses the
/// M auxiliary prior draws (K = M), excluding the joint-generating theta.
struct NmcConfig {
  int outer_n;   // N
  int inner_m;   // M
  Order order;   // alpha in (0, 1)
  bool exact_ratio = false;  // use the closed-form marginal when exposed

  NmcConfig(int n, int m, Order ord);
};

/// Nested Monte Carlo estimate of the robust expected information gain.
/// Log-domain throughout; one derived RNG stream per outer index.
double estimate(const GenerativeModel& model, const Eigen::VectorXd& design,
                const NmcConfig& config, Seed seed);

/// Arithmetic core on cached values: inner_log_lik(i, j) = ell(theta_ij, x_i)
/// for the M auxiliary draws; exact_log_marginals, when present, switch to
/// exact density ratios.
double estimate_from_log_liks(const Eigen::MatrixXd& inner_log_lik,
                              const Order& order,
                              const std::vector<double>* exact_log_marginals = nullptr);

/// Independent estimates, one derived seed per list position; order-stable.
std::vector<double> estimate_per_design(const GenerativeModel& model,
                                        const std::vector<Eigen::VectorXd>& designs,
                                        const NmcConfig& config, Seed seed);

/// Smallest inner budget satisfying the concentration requirement
/// M >= 2 N L_h^2 sigma_w^2 / (C_h^2 log(2/delta)), never below 1.
int min_inner_samples(int outer_n, double delta,
                      const RegularityConstants& constants);

struct BiasCurveRow {
  int inner_m;
  double mean_error;
  std::optional<double> std_error;  // absent for a single repetition
};

/// Empirical estimator error against the model's closed form across an
/// inner-budget grid.
std::vector<BiasCurveRow> bias_curve(const GenerativeModel& model,
                                     const Eigen::VectorXd& design,
                                     const Order& order, int outer_n,
                                     const std::vector<int>& inner_grid,
                                     int reps, Seed seed);

/// Adapters for the two conjugate families.

class LinRegGenerative final : public GenerativeModel {
 public:
  /// Affine map: each design component is one scalar measurement design.
  /// Identity map: the design vector is a single d-dimensional measurement.
  LinRegGenerative(LinRegModel model, FeatureMap map);

  Eigen::VectorXd sample_prior(Rng& rng) const override;
  void sample_prior_batch(Rng& rng, Eigen::MatrixXd& out) const override;
  Eigen::VectorXd sample_outcome(VecRef theta, VecRef design,
                                 Rng& rng) const override;
  double log_likelihood(VecRef outcome, VecRef theta,
                        VecRef design) const override;
  std::optional<double> log_marginal(VecRef outcome, VecRef design) const override;
  std::optional<double> closed_form_mi(const Eigen::VectorXd& design,
                                       const Order& order) const override;

  DesignBatch to_batch(VecRef design) const;
  const LinRegModel& model() const { return model_; }

 private:
  LinRegModel model_;
  FeatureMap map_;
  Eigen::MatrixXd prior_chol_;
};

class ABTestGenerative final : public GenerativeModel {
 public:
  /// Design vector holds a single rounded component: the allocation n_a.
  explicit ABTestGenerative(ABModel model);

  Eigen::VectorXd sample_prior(Rng& rng) const override;
  Eigen::VectorXd sample_outcome(VecRef theta, VecRef design,
                                 Rng& rng) const override;
  double log_likelihood(VecRef outcome, VecRef theta,
                        VecRef design) const override;
  std::optional<double> log_marginal(VecRef outcome, VecRef design) const override;
  std::optional<double> closed_form_mi(const Eigen::VectorXd& design,
                                       const Order& order) const override;

  Allocation to_allocation(VecRef design) const;
  const ABModel& model() const { return model_; }

 private:
  ABModel model_;
};

}  // namespace robed
