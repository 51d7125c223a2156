// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#include "robed/nmc.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace robed {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

double gaussian_log_pdf(double x, double mean, double var) {
  const double r = x - mean;
  return -0.5 * (kLogTwoPi + std::log(var) + r * r / var);
}

}  // namespace

NmcConfig::NmcConfig(int n, int m, Order ord) : outer_n(n), inner_m(m), order(ord) {
  if (n < 1 || m < 1) {
    throw std::invalid_argument("NmcConfig: budgets must be >= 1");
  }
  if (order.is_shannon()) {
    throw std::invalid_argument("NmcConfig: order must satisfy alpha < 1");
  }
}

double estimate_from_log_liks(const Eigen::MatrixXd& inner_log_lik,
                              const Order& order,
                              const std::vector<double>* exact_log_marginals) {
  const Eigen::Index n = inner_log_lik.rows();
  const Eigen::Index m = inner_log_lik.cols();
  const double alpha = order.alpha();

  std::vector<double> row(m);
  std::vector<double> powered(m);
  std::vector<double> outer_terms(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double ll = inner_log_lik(i, j);
      if (std::isnan(ll) || ll == std::numeric_limits<double>::infinity() ||
          ll == -std::numeric_limits<double>::infinity()) {
        throw std::runtime_error("nmc estimate failed: non-finite log-likelihood at pair (" +
                                 std::to_string(i) + ", " + std::to_string(j) + ")");
      }
      row[j] = ll;
    }
    // log w(i, j): contrastive self-normalization over the auxiliary draws,
    // or the exact density ratio when the marginal is supplied.
    double log_norm;
    if (exact_log_marginals != nullptr) {
      log_norm = (*exact_log_marginals)[static_cast<std::size_t>(i)];
    } else {
      log_norm = log_sum_exp(row) - std::log(static_cast<double>(m));
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      powered[j] = alpha * (row[j] - log_norm);
    }
    const double inner = log_sum_exp(powered) - std::log(static_cast<double>(m));
    outer_terms[i] = inner / alpha;
  }
  const double outer =
      log_sum_exp(outer_terms) - std::log(static_cast<double>(n));
  return alpha / (alpha - 1.0) * outer;
}

double estimate(const GenerativeModel& model, const Eigen::VectorXd& design,
                const NmcConfig& config, Seed seed) {
  const int n = config.outer_n;
  const int m = config.inner_m;
  Eigen::MatrixXd inner_log_lik(n, m);
  std::vector<double> exact_marginals;
  const bool exact = config.exact_ratio;
  if (exact) exact_marginals.resize(n);

  Eigen::MatrixXd aux;
  for (int i = 0; i < n; ++i) {
    Rng rng = seed.derive(static_cast<std::uint64_t>(i)).engine();
    const Eigen::VectorXd theta = model.sample_prior(rng);
    const Eigen::VectorXd x = model.sample_outcome(theta, design, rng);
    if (aux.rows() != theta.size() || aux.cols() != m) aux.resize(theta.size(), m);
    model.sample_prior_batch(rng, aux);
    for (int j = 0; j < m; ++j) {
      inner_log_lik(i, j) = model.log_likelihood(x, aux.col(j), design);
    }
    if (exact) {
      const auto lm = model.log_marginal(x, design);
      if (!lm) {
        throw std::runtime_error("nmc estimate: exact-ratio mode requires a closed-form marginal");
      }
      exact_marginals[static_cast<std::size_t>(i)] = *lm;
    }
  }
  return estimate_from_log_liks(inner_log_lik, config.order,
                                exact ? &exact_marginals : nullptr);
}

std::vector<double> estimate_per_design(const GenerativeModel& model,
                                        const std::vector<Eigen::VectorXd>& designs,
                                        const NmcConfig& config, Seed seed) {
  if (designs.empty()) {
    throw std::invalid_argument("estimate_per_design: empty design list");
  }
  std::vector<double> out;
  out.reserve(designs.size());
  for (std::size_t k = 0; k < designs.size(); ++k) {
    out.push_back(estimate(model, designs[k], config, seed.derive(k)));
  }
  return out;
}

int min_inner_samples(int outer_n, double delta,
                      const RegularityConstants& constants) {
  constants.validate();
  if (!(constants.c_h > 0.0)) {
    throw std::invalid_argument("min_inner_samples: C_h must be > 0");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("min_inner_samples: delta must lie in (0, 1)");
  }
  const double raw = 2.0 * outer_n * constants.l_h * constants.l_h *
                     constants.sigma_w * constants.sigma_w /
                     (constants.c_h * constants.c_h * std::log(2.0 / delta));
  const double c = std::ceil(raw);
  return c < 1.0 ? 1 : static_cast<int>(c);
}

std::vector<BiasCurveRow> bias_curve(const GenerativeModel& model,
                                     const Eigen::VectorXd& design,
                                     const Order& order, int outer_n,
                                     const std::vector<int>& inner_grid,
                                     int reps, Seed seed) {
  const auto reference = model.closed_form_mi(design, order);
  if (!reference) {
    throw std::invalid_argument("bias_curve: model exposes no closed form for this design");
  }
  if (reps < 1) {
    throw std::invalid_argument("bias_curve: reps must be >= 1");
  }
  std::vector<BiasCurveRow> rows;
  rows.reserve(inner_grid.size());
  for (std::size_t g = 0; g < inner_grid.size(); ++g) {
    const NmcConfig config(outer_n, inner_grid[g], order);
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < reps; ++r) {
      const double err =
          estimate(model, design, config, seed.derive(g * 1000003ULL + r)) -
          *reference;
      sum += err;
      sum_sq += err * err;
    }
    const double mean = sum / reps;
    std::optional<double> sd;
    if (reps > 1) {
      sd = std::sqrt(std::max(0.0, (sum_sq - reps * mean * mean) / (reps - 1)));
    }
    rows.push_back(BiasCurveRow{inner_grid[g], mean, sd});
  }
  return rows;
}

LinRegGenerative::LinRegGenerative(LinRegModel model, FeatureMap map)
    : model_(std::move(model)), map_(map) {
  if (map_ == FeatureMap::affine && model_.design_dim() != 1) {
    throw std::invalid_argument(
        "LinRegGenerative: the affine adapter takes scalar designs");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(model_.prior_cov);
  prior_chol_ = llt.matrixL();
}

DesignBatch LinRegGenerative::to_batch(GenerativeModel::VecRef design) const {
  DesignBatch batch;
  batch.map = map_;
  if (map_ == FeatureMap::affine) {
    for (Eigen::Index i = 0; i < design.size(); ++i) {
      batch.designs.push_back(Eigen::VectorXd::Constant(1, design[i]));
    }
  } else {
    batch.designs.push_back(design);
  }
  return batch;
}

Eigen::VectorXd LinRegGenerative::sample_prior(Rng& rng) const {
  std::normal_distribution<double> std_normal(0.0, 1.0);
  Eigen::VectorXd z(model_.param_dim());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = std_normal(rng);
  return model_.prior_mean + prior_chol_ * z;
}

void LinRegGenerative::sample_prior_batch(Rng& rng, Eigen::MatrixXd& out) const {
  std::normal_distribution<double> std_normal(0.0, 1.0);
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) = std_normal(rng);
  }
  out = (prior_chol_ * out).colwise() + model_.prior_mean;
}

Eigen::VectorXd LinRegGenerative::sample_outcome(VecRef theta, VecRef design,
                                                 Rng& rng) const {
  std::normal_distribution<double> noise(0.0, std::sqrt(model_.noise_var));
  if (map_ == FeatureMap::identity) {
    Eigen::VectorXd x(1);
    x[0] = design.dot(theta) + noise(rng);
    return x;
  }
  Eigen::VectorXd x(design.size());
  for (Eigen::Index i = 0; i < design.size(); ++i) {
    x[i] = design[i] * theta[0] + theta[1] + noise(rng);
  }
  return x;
}

double LinRegGenerative::log_likelihood(VecRef outcome, VecRef theta,
                                        VecRef design) const {
  // Hot path of the nested estimator; no design-matrix materialization.
  if (map_ == FeatureMap::identity) {
    return gaussian_log_pdf(outcome[0], design.dot(theta), model_.noise_var);
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < design.size(); ++i) {
    total += gaussian_log_pdf(outcome[i], design[i] * theta[0] + theta[1],
                              model_.noise_var);
  }
  return total;
}

std::optional<double> LinRegGenerative::log_marginal(VecRef outcome,
                                                     VecRef design) const {
  const Eigen::MatrixXd h = design_matrix(model_, to_batch(design));
  const Eigen::Index n = h.rows();
  const Eigen::MatrixXd cov =
      h * model_.prior_cov * h.transpose() +
      model_.noise_var * Eigen::MatrixXd::Identity(n, n);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  const Eigen::VectorXd r = outcome - h * model_.prior_mean;
  const double log_det =
      2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return -0.5 * (n * kLogTwoPi + log_det + r.dot(llt.solve(r)));
}

std::optional<double> LinRegGenerative::closed_form_mi(
    const Eigen::VectorXd& design, const Order& order) const {
  return sibson_mi(model_, to_batch(design), order);
}

ABTestGenerative::ABTestGenerative(ABModel model) : model_(std::move(model)) {}

Allocation ABTestGenerative::to_allocation(VecRef design) const {
  if (design.size() != 1) {
    throw std::invalid_argument("ABTestGenerative: design must hold n_a only");
  }
  return allocation(model_, static_cast<int>(std::lround(design[0])));
}

Eigen::VectorXd ABTestGenerative::sample_prior(Rng& rng) const {
  Eigen::VectorXd theta(2);
  theta[0] = sample_beta(rng, model_.prior_a.delta, model_.prior_a.gamma);
  theta[1] = sample_beta(rng, model_.prior_b.delta, model_.prior_b.gamma);
  return theta;
}

Eigen::VectorXd ABTestGenerative::sample_outcome(VecRef theta, VecRef design,
                                                 Rng& rng) const {
  const Allocation alloc = to_allocation(design);
  Eigen::VectorXd x(2);
  x[0] = sample_binomial(rng, alloc.n_a, theta[0]);
  x[1] = sample_binomial(rng, alloc.n_b, theta[1]);
  return x;
}

double ABTestGenerative::log_likelihood(VecRef outcome, VecRef theta,
                                        VecRef design) const {
  const Allocation alloc = to_allocation(design);
  const int counts[2] = {alloc.n_a, alloc.n_b};
  double total = 0.0;
  for (int k = 0; k < 2; ++k) {
    const int n = counts[k];
    const int x = static_cast<int>(std::lround(outcome[k]));
    const double p = theta[k];
    const double log_choose = std::lgamma(n + 1.0) - std::lgamma(x + 1.0) -
                              std::lgamma(n - x + 1.0);
    double ll = log_choose;
    if (x > 0) ll += x * std::log(p);
    if (n - x > 0) ll += (n - x) * std::log1p(-p);
    total += ll;
  }
  return total;
}

std::optional<double> ABTestGenerative::log_marginal(VecRef outcome,
                                                     VecRef design) const {
  const Allocation alloc = to_allocation(design);
  const ABOutcome x{static_cast<int>(std::lround(outcome[0])),
                    static_cast<int>(std::lround(outcome[1]))};
  return marginal_log_pmf(model_, alloc, x);
}

std::optional<double> ABTestGenerative::closed_form_mi(
    const Eigen::VectorXd& design, const Order& order) const {
  return sibson_mi(model_, to_allocation(design), order);
}

}  // namespace robed
