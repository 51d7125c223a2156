// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "robed/core.hpp"
#include "robed/renyi.hpp"

namespace robed {

/// Two-group Beta-Binomial A/B testing model with a fixed subject budget.
struct ABModel {
  BetaDist prior_a;
  BetaDist prior_b;
  int total_budget;  // N_x >= 1

  ABModel(BetaDist a, BetaDist b, int budget);
};

/// Split of the budget between the groups; n_a + n_b == N_x always.
struct Allocation {
  int n_a;
  int n_b;
};

Allocation allocation(const ABModel& model, int n_a);

struct ABOutcome {
  int x_a;
  int x_b;
};

/// Largest budget for which the (n_a+1)(n_b+1) outcome grid is enumerated
/// exactly; beyond this, fall back to the nested MC estimator.
inline constexpr int kEnumerationCap = 200;

/// Flat index of an outcome on the grid; x_a-major, x_b fastest.
std::size_t outcome_index(const Allocation& alloc, const ABOutcome& outcome);
std::vector<ABOutcome> outcome_grid(const Allocation& alloc);

/// Beta-Binomial log pmf, additive over the two groups.
double marginal_log_pmf(const ABModel& model, const Allocation& alloc,
                        const ABOutcome& outcome);

std::pair<BetaDist, BetaDist> posterior(const ABModel& model,
                                        const Allocation& alloc,
                                        const ABOutcome& outcome);

/// Tempered shapes delta + alpha x, gamma + alpha (n - x).
std::pair<BetaDist, BetaDist> tilted_posterior(const ABModel& model,
                                               const Allocation& alloc,
                                               const ABOutcome& outcome,
                                               const Order& order);

/// Per-group log of the tilted evidence term:
/// alpha log C(n,x) + log B(delta + alpha x, gamma + alpha(n-x)) - log B(delta, gamma).
double log_z_alpha(const BetaDist& prior, int n, int x, const Order& order);

/// Tilted outcome distribution over the full grid, normalized; equals the
/// Beta-Binomial marginal at alpha = 1.
std::vector<double> tilted_marginal_pmf(const ABModel& model,
                                        const Allocation& alloc,
                                        const Order& order);

/// Closed form, additive over groups; Shannon EIG at alpha = 1.
double sibson_mi(const ABModel& model, const Allocation& alloc,
                 const Order& order);

struct ABJointSample {
  double theta_a;
  double theta_b;
  ABOutcome outcome;
};

/// Exact ancestral draws from the worst-case joint: x from the tilted
/// marginal by inverse CDF, then theta from the tilted posterior. The
/// nominal process at alpha = 1.
std::vector<ABJointSample> sample_worst_case(const ABModel& model,
                                             const Allocation& alloc,
                                             const Order& order, int count,
                                             Seed seed);

/// Realized gain: sum over groups of D_alpha[posterior_k || prior_k].
double conditional_gain(const ABModel& model, const Allocation& alloc,
                        const ABOutcome& outcome, const Order& order);

/// Beta-Binomial log pmf of a test outcome under supplied (possibly
/// tilted) posterior shapes.
double log_predictive_pmf(const ABModel& model,
                          const std::pair<BetaDist, BetaDist>& posterior_pair,
                          const Allocation& test_alloc,
                          const ABOutcome& test_outcome);

}  // namespace robed
