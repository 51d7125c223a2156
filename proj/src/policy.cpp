// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#include "robed/policy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace robed {

namespace {

void check_normalized(const Eigen::VectorXd& log_probs) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < log_probs.size(); ++i) {
    total += std::exp(log_probs[i]);
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("DiscretePolicy: probabilities must sum to 1");
  }
}

Eigen::VectorXd renormalize(const Eigen::VectorXd& logits) {
  std::vector<double> v(logits.data(), logits.data() + logits.size());
  const double norm = log_sum_exp(v);
  return logits.array() - norm;
}

}  // namespace

DiscretePolicy::DiscretePolicy(std::vector<Eigen::VectorXd> support_in,
                               Eigen::VectorXd log_probs_in)
    : support(std::move(support_in)), log_probs(std::move(log_probs_in)) {
  if (support.empty()) {
    throw std::invalid_argument("DiscretePolicy: empty support");
  }
  if (static_cast<std::size_t>(log_probs.size()) != support.size()) {
    throw std::invalid_argument("DiscretePolicy: size mismatch");
  }
  for (std::size_t i = 0; i < support.size(); ++i) {
    for (std::size_t j = i + 1; j < support.size(); ++j) {
      if (support[i].size() == support[j].size() && support[i] == support[j]) {
        throw std::invalid_argument("DiscretePolicy: duplicate designs");
      }
    }
  }
  check_normalized(log_probs);
}

DiscretePolicy DiscretePolicy::uniform(std::vector<Eigen::VectorXd> support_in) {
  const auto n = static_cast<Eigen::Index>(support_in.size());
  return DiscretePolicy(std::move(support_in),
                        Eigen::VectorXd::Constant(n, -std::log(double(n))));
}

BoxedGaussianPolicy::BoxedGaussianPolicy(Eigen::VectorXd mean_in,
                                         Eigen::VectorXd log_std_in,
                                         Eigen::VectorXd lo, Eigen::VectorXd hi)
    : mean(std::move(mean_in)),
      log_std(std::move(log_std_in)),
      box_lo(std::move(lo)),
      box_hi(std::move(hi)) {
  if (mean.size() != log_std.size() || mean.size() != box_lo.size() ||
      mean.size() != box_hi.size()) {
    throw std::invalid_argument("BoxedGaussianPolicy: size mismatch");
  }
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    if (!(box_lo[i] < box_hi[i])) {
      throw std::invalid_argument("BoxedGaussianPolicy: empty box");
    }
    if (mean[i] < box_lo[i] || mean[i] > box_hi[i]) {
      throw std::invalid_argument("BoxedGaussianPolicy: mean outside box");
    }
    const double sd = std::exp(log_std[i]);
    if (!(sd > 0.0) || sd > box_hi[i] - box_lo[i]) {
      throw std::invalid_argument("BoxedGaussianPolicy: std outside (0, width]");
    }
  }
}

Eigen::VectorXd BoxedGaussianPolicy::sample(Rng& rng) const {
  std::normal_distribution<double> std_normal(0.0, 1.0);
  Eigen::VectorXd x(mean.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x[i] = mean[i] + std::exp(log_std[i]) * std_normal(rng);
  }
  return x;
}

Eigen::VectorXd BoxedGaussianPolicy::clip(const Eigen::VectorXd& x) const {
  return x.cwiseMax(box_lo).cwiseMin(box_hi);
}

PacConfig::PacConfig(double lambda_in, double delta_in, RegularityConstants c)
    : lambda(lambda_in), delta(delta_in), constants(c) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("PacConfig: lambda must be > 0");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("PacConfig: delta must lie in (0, 1)");
  }
  constants.validate();
}

DiscretePolicy gibbs_update(const DiscretePolicy& prior,
                            const Eigen::VectorXd& estimates, double lambda) {
  if (static_cast<std::size_t>(estimates.size()) != prior.size()) {
    throw std::invalid_argument("gibbs_update: estimate length mismatch");
  }
  if (!estimates.allFinite()) {
    throw std::invalid_argument("gibbs_update: estimates must be finite");
  }
  const Eigen::VectorXd logits = prior.log_probs + lambda * estimates;
  return DiscretePolicy(prior.support, renormalize(logits));
}

double pac_objective(const DiscretePolicy& policy,
                     const Eigen::VectorXd& estimates,
                     const DiscretePolicy& prior, double lambda) {
  if (static_cast<std::size_t>(estimates.size()) != policy.size() ||
      policy.size() != prior.size()) {
    throw std::invalid_argument("pac_objective: shape mismatch");
  }
  const double kl = kl_policies(policy, prior);
  double mean = 0.0;
  for (Eigen::Index i = 0; i < estimates.size(); ++i) {
    mean += std::exp(policy.log_probs[i]) * estimates[i];
  }
  return mean - kl / lambda;
}

double pac_lower_bound(double empirical_mean, double kl,
                       const PacConfig& config, int outer_n) {
  if (outer_n < 1) {
    throw std::invalid_argument("pac_lower_bound: outer_n must be >= 1");
  }
  const double lf_ch = config.constants.l_f * config.constants.c_h;
  return empirical_mean - config.lambda * lf_ch * lf_ch / (2.0 * outer_n) -
         (kl + std::log(1.0 / config.delta)) / config.lambda;
}

double kl_policies(const DiscretePolicy& a, const DiscretePolicy& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("kl_policies: support size mismatch");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.support[i].size() != b.support[i].size() ||
        a.support[i] != b.support[i]) {
      throw std::invalid_argument("kl_policies: support mismatch");
    }
  }
  double kl = 0.0;
  for (Eigen::Index i = 0; i < a.log_probs.size(); ++i) {
    const double pa = std::exp(a.log_probs[i]);
    if (pa == 0.0) continue;
    if (b.log_probs[i] == -std::numeric_limits<double>::infinity()) {
      throw std::domain_error("kl_policies: prior has zero mass on the support");
    }
    kl += pa * (a.log_probs[i] - b.log_probs[i]);
  }
  return std::max(0.0, kl);
}

double kl_policies(const BoxedGaussianPolicy& a, const BoxedGaussianPolicy& b) {
  if (a.dim() != b.dim() || a.box_lo != b.box_lo || a.box_hi != b.box_hi) {
    throw std::invalid_argument("kl_policies: box mismatch");
  }
  double kl = 0.0;
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    const double va = std::exp(2.0 * a.log_std[i]);
    const double vb = std::exp(2.0 * b.log_std[i]);
    const double dm = a.mean[i] - b.mean[i];
    kl += b.log_std[i] - a.log_std[i] + (va + dm * dm) / (2.0 * vb) - 0.5;
  }
  return std::max(0.0, kl);
}

BoxedGaussianPolicy mirror_descent(const DesignOracle& objective,
                                   const BoxedGaussianPolicy& prior,
                                   const PacConfig& config,
                                   const MirrorDescentOptions& options,
                                   Seed seed) {
  if (options.steps < 1) {
    throw std::invalid_argument("mirror_descent: steps must be >= 1");
  }
  if (options.batch < 2) {
    throw std::invalid_argument("mirror_descent: batch must be >= 2");
  }
  const Eigen::Index d = prior.dim();
  BoxedGaussianPolicy policy = prior;

  for (int step = 0; step < options.steps; ++step) {
    const Seed step_seed = seed.derive(static_cast<std::uint64_t>(step));
    Rng rng = step_seed.engine();

    std::vector<Eigen::VectorXd> draws(options.batch);
    std::vector<double> values(options.batch);
    for (int b = 0; b < options.batch; ++b) {
      draws[b] = policy.sample(rng);
      const Seed oracle_seed =
          options.common_random_numbers
              ? step_seed.derive(1000)
              : step_seed.derive(1000 + static_cast<std::uint64_t>(b));
      values[b] = objective(policy.clip(draws[b]), oracle_seed);
      if (!std::isfinite(values[b])) {
        throw std::runtime_error("mirror_descent: oracle failed at step " +
                                 std::to_string(step) + ", design " +
                                 std::to_string(b));
      }
    }
    double baseline = 0.0;
    for (double v : values) baseline += v;
    baseline /= options.batch;

    Eigen::VectorXd grad_mean = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd grad_log_std = Eigen::VectorXd::Zero(d);
    for (int b = 0; b < options.batch; ++b) {
      const double adv = values[b] - baseline;
      for (Eigen::Index i = 0; i < d; ++i) {
        const double sd = std::exp(policy.log_std[i]);
        const double z = (draws[b][i] - policy.mean[i]) / sd;
        grad_mean[i] += adv * z / sd;
        grad_log_std[i] += adv * (z * z - 1.0);
      }
    }
    grad_mean /= options.batch;
    grad_log_std /= options.batch;

    // KL(pi || prior) gradient, analytic for diagonal Gaussians.
    for (Eigen::Index i = 0; i < d; ++i) {
      const double v0 = std::exp(2.0 * prior.log_std[i]);
      const double va = std::exp(2.0 * policy.log_std[i]);
      grad_mean[i] -= (policy.mean[i] - prior.mean[i]) / v0 / config.lambda;
      grad_log_std[i] -= (va / v0 - 1.0) / config.lambda;
    }

    const double anneal =
        options.steps == 1
            ? 1.0
            : 1.0 + (options.final_step_scale - 1.0) * step / (options.steps - 1);
    Eigen::VectorXd new_mean =
        policy.mean + anneal * options.mean_step * grad_mean;
    Eigen::VectorXd new_log_std =
        policy.log_std + anneal * options.log_std_step * grad_log_std;
    for (Eigen::Index i = 0; i < d; ++i) {
      new_mean[i] = std::clamp(new_mean[i], policy.box_lo[i], policy.box_hi[i]);
      const double width = policy.box_hi[i] - policy.box_lo[i];
      new_log_std[i] =
          std::clamp(new_log_std[i], std::log(1e-6), std::log(width));
    }
    policy = BoxedGaussianPolicy(std::move(new_mean), std::move(new_log_std),
                                 policy.box_lo, policy.box_hi);
    if (options.on_step) options.on_step(step, policy);
  }
  return policy;
}

}  // namespace robed
