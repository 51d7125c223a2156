// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#include "robed/abtest.hpp"

#include <cmath>
#include <stdexcept>

namespace robed {

namespace {

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

void check_outcome(const Allocation& alloc, const ABOutcome& outcome,
                   const char* what) {
  if (outcome.x_a < 0 || outcome.x_a > alloc.n_a || outcome.x_b < 0 ||
      outcome.x_b > alloc.n_b) {
    throw std::invalid_argument(std::string(what) + ": outcome out of range");
  }
}

double group_log_pmf(const BetaDist& prior, int n, int x) {
  return log_choose(n, x) +
         log_beta_fn(prior.delta + x, prior.gamma + n - x) -
         log_beta_fn(prior.delta, prior.gamma);
}

// (alpha/(alpha-1)) LSE_x(log Z_alpha / alpha) for one group; Shannon
// enumeration at alpha = 1.
double group_sibson_mi(const BetaDist& prior, int n, const Order& order) {
  if (n == 0) return 0.0;
  if (order.is_shannon()) {
    double total = 0.0;
    for (int x = 0; x <= n; ++x) {
      const BetaDist post(prior.delta + x, prior.gamma + n - x);
      total += std::exp(group_log_pmf(prior, n, x)) * kl_beta(post, prior);
    }
    return total;
  }
  const double a = order.alpha();
  std::vector<double> terms(n + 1);
  for (int x = 0; x <= n; ++x) {
    terms[x] = log_z_alpha(prior, n, x, order) / a;
  }
  return a / (a - 1.0) * log_sum_exp(terms);
}

}  // namespace

ABModel::ABModel(BetaDist a, BetaDist b, int budget)
    : prior_a(a), prior_b(b), total_budget(budget) {
  if (budget < 1) {
    throw std::invalid_argument("ABModel: total budget must be >= 1");
  }
}

Allocation allocation(const ABModel& model, int n_a) {
  if (n_a < 0 || n_a > model.total_budget) {
    throw std::invalid_argument("allocation: n_a outside [0, N_x]");
  }
  return Allocation{n_a, model.total_budget - n_a};
}

std::size_t outcome_index(const Allocation& alloc, const ABOutcome& outcome) {
  check_outcome(alloc, outcome, "outcome_index");
  return static_cast<std::size_t>(outcome.x_a) * (alloc.n_b + 1) + outcome.x_b;
}

std::vector<ABOutcome> outcome_grid(const Allocation& alloc) {
  std::vector<ABOutcome> grid;
  grid.reserve(static_cast<std::size_t>(alloc.n_a + 1) * (alloc.n_b + 1));
  for (int xa = 0; xa <= alloc.n_a; ++xa) {
    for (int xb = 0; xb <= alloc.n_b; ++xb) {
      grid.push_back(ABOutcome{xa, xb});
    }
  }
  return grid;
}

double marginal_log_pmf(const ABModel& model, const Allocation& alloc,
                        const ABOutcome& outcome) {
  check_outcome(alloc, outcome, "marginal_log_pmf");
  return group_log_pmf(model.prior_a, alloc.n_a, outcome.x_a) +
         group_log_pmf(model.prior_b, alloc.n_b, outcome.x_b);
}

std::pair<BetaDist, BetaDist> posterior(const ABModel& model,
                                        const Allocation& alloc,
                                        const ABOutcome& outcome) {
  check_outcome(alloc, outcome, "posterior");
  return {BetaDist(model.prior_a.delta + outcome.x_a,
                   model.prior_a.gamma + alloc.n_a - outcome.x_a),
          BetaDist(model.prior_b.delta + outcome.x_b,
                   model.prior_b.gamma + alloc.n_b - outcome.x_b)};
}

std::pair<BetaDist, BetaDist> tilted_posterior(const ABModel& model,
                                               const Allocation& alloc,
                                               const ABOutcome& outcome,
                                               const Order& order) {
  check_outcome(alloc, outcome, "tilted_posterior");
  const double a = order.alpha();
  return {BetaDist(model.prior_a.delta + a * outcome.x_a,
                   model.prior_a.gamma + a * (alloc.n_a - outcome.x_a)),
          BetaDist(model.prior_b.delta + a * outcome.x_b,
                   model.prior_b.gamma + a * (alloc.n_b - outcome.x_b))};
}

double log_z_alpha(const BetaDist& prior, int n, int x, const Order& order) {
  if (x < 0 || x > n || n < 0) {
    throw std::invalid_argument("log_z_alpha: count out of range");
  }
  const double a = order.alpha();
  return a * log_choose(n, x) +
         log_beta_fn(prior.delta + a * x, prior.gamma + a * (n - x)) -
         log_beta_fn(prior.delta, prior.gamma);
}

std::vector<double> tilted_marginal_pmf(const ABModel& model,
                                        const Allocation& alloc,
                                        const Order& order) {
  const double a = order.alpha();
  std::vector<double> logits;
  logits.reserve(static_cast<std::size_t>(alloc.n_a + 1) * (alloc.n_b + 1));
  for (int xa = 0; xa <= alloc.n_a; ++xa) {
    const double la = log_z_alpha(model.prior_a, alloc.n_a, xa, order);
    for (int xb = 0; xb <= alloc.n_b; ++xb) {
      const double lb = log_z_alpha(model.prior_b, alloc.n_b, xb, order);
      logits.push_back((la + lb) / a);
    }
  }
  const double norm = log_sum_exp(logits);
  std::vector<double> pmf(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    pmf[i] = std::exp(logits[i] - norm);
  }
  return pmf;
}

double sibson_mi(const ABModel& model, const Allocation& alloc,
                 const Order& order) {
  return group_sibson_mi(model.prior_a, alloc.n_a, order) +
         group_sibson_mi(model.prior_b, alloc.n_b, order);
}

std::vector<ABJointSample> sample_worst_case(const ABModel& model,
                                             const Allocation& alloc,
                                             const Order& order, int count,
                                             Seed seed) {
  if (count < 1) {
    throw std::invalid_argument("sample_worst_case: count must be >= 1");
  }
  const std::vector<double> pmf = tilted_marginal_pmf(model, alloc, order);
  const std::vector<ABOutcome> grid = outcome_grid(alloc);

  Rng rng = seed.engine();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<ABJointSample> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    const double u = unif(rng);
    double cum = 0.0;
    std::size_t idx = pmf.size() - 1;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
      cum += pmf[i];
      if (u <= cum) {
        idx = i;
        break;
      }
    }
    const ABOutcome x = grid[idx];
    const auto [post_a, post_b] = tilted_posterior(model, alloc, x, order);
    const double ta = sample_beta(rng, post_a.delta, post_a.gamma);
    const double tb = sample_beta(rng, post_b.delta, post_b.gamma);
    out.push_back(ABJointSample{ta, tb, x});
  }
  return out;
}

double conditional_gain(const ABModel& model, const Allocation& alloc,
                        const ABOutcome& outcome, const Order& order) {
  const auto [post_a, post_b] = posterior(model, alloc, outcome);
  return renyi_beta(post_a, model.prior_a, order) +
         renyi_beta(post_b, model.prior_b, order);
}

double log_predictive_pmf(const ABModel& model,
                          const std::pair<BetaDist, BetaDist>& posterior_pair,
                          const Allocation& test_alloc,
                          const ABOutcome& test_outcome) {
  (void)model;
  check_outcome(test_alloc, test_outcome, "log_predictive_pmf");
  return group_log_pmf(posterior_pair.first, test_alloc.n_a, test_outcome.x_a) +
         group_log_pmf(posterior_pair.second, test_alloc.n_b, test_outcome.x_b);
}

}  // namespace robed
