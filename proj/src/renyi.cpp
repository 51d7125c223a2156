// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#include "robed/renyi.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <stdexcept>

namespace robed {

namespace {

Eigen::LLT<Eigen::MatrixXd> checked_llt(const Eigen::MatrixXd& cov,
                                        const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument(std::string(what) +
                                ": covariance is not positive definite");
  }
  return llt;
}

double log_det_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

void check_same_dim(const GaussianDist& q, const GaussianDist& p,
                    const char* what) {
  if (q.dim() != p.dim()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}

}  // namespace

GaussianDist::GaussianDist(Eigen::VectorXd mean_in, Eigen::MatrixXd cov_in)
    : mean(std::move(mean_in)), cov(std::move(cov_in)) {
  if (cov.rows() != cov.cols() || cov.rows() != mean.size()) {
    throw std::invalid_argument("GaussianDist: shape mismatch");
  }
  const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= 1e-10)) {
    throw std::invalid_argument("GaussianDist: covariance not symmetric");
  }
  checked_llt(cov, "GaussianDist");
}

BetaDist::BetaDist(double delta_in, double gamma_in)
    : delta(delta_in), gamma(gamma_in) {
  if (!(delta > 0.0) || !(gamma > 0.0)) {
    throw std::invalid_argument("BetaDist: shapes must be positive");
  }
}

double log_beta_fn(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double renyi_gaussian(const GaussianDist& q, const GaussianDist& p,
                      const Order& order) {
  check_same_dim(q, p, "renyi_gaussian");
  if (order.is_shannon()) return kl_gaussian(q, p);
  const double a = order.alpha();

  const auto llt_q = checked_llt(q.cov, "renyi_gaussian");
  const auto llt_p = checked_llt(p.cov, "renyi_gaussian");
  const Eigen::Index d = q.dim();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd prec_q = llt_q.solve(eye);
  const Eigen::MatrixXd prec_p = llt_p.solve(eye);

  // Geometric-mixture precision; PD for alpha in (0,1).
  const Eigen::MatrixXd prec_mix = a * prec_q + (1.0 - a) * prec_p;
  const auto llt_mix = checked_llt(prec_mix, "renyi_gaussian (mixture)");

  const Eigen::VectorXd eta = a * (prec_q * q.mean) + (1.0 - a) * (prec_p * p.mean);
  const Eigen::VectorXd mu_mix = llt_mix.solve(eta);

  const double z = a * q.mean.dot(prec_q * q.mean) +
                   (1.0 - a) * p.mean.dot(prec_p * p.mean) -
                   mu_mix.dot(prec_mix * mu_mix);

  // log|Sigma_mix| = -log|prec_mix|
  const double log_det_mix = -log_det_from_llt(llt_mix);
  const double log_det_q = log_det_from_llt(llt_q);
  const double log_det_p = log_det_from_llt(llt_p);
  const double log_ratio = log_det_mix - a * log_det_q - (1.0 - a) * log_det_p;

  return z / (2.0 * (1.0 - a)) + log_ratio / (2.0 * (a - 1.0));
}

double renyi_beta(const BetaDist& q, const BetaDist& p, const Order& order) {
  if (order.is_shannon()) return kl_beta(q, p);
  const double a = order.alpha();

  const double delta_mix = a * (q.delta - 1.0) + (1.0 - a) * (p.delta - 1.0) + 1.0;
  const double gamma_mix = a * (q.gamma - 1.0) + (1.0 - a) * (p.gamma - 1.0) + 1.0;
  if (!(delta_mix > 0.0) || !(gamma_mix > 0.0)) {
    throw std::domain_error(
        "renyi_beta: degenerate mixture shapes (divergence infinite)");
  }
  return log_beta_fn(delta_mix, gamma_mix) / (a - 1.0) -
         a / (a - 1.0) * log_beta_fn(q.delta, q.gamma) -
         (1.0 - a) / (a - 1.0) * log_beta_fn(p.delta, p.gamma);
}

double kl_gaussian(const GaussianDist& q, const GaussianDist& p) {
  check_same_dim(q, p, "kl_gaussian");
  const auto llt_q = checked_llt(q.cov, "kl_gaussian");
  const auto llt_p = checked_llt(p.cov, "kl_gaussian");
  const Eigen::Index d = q.dim();

  const Eigen::MatrixXd sol = llt_p.solve(q.cov);
  const Eigen::VectorXd dm = p.mean - q.mean;
  const double quad = dm.dot(llt_p.solve(dm));
  const double log_det_ratio = log_det_from_llt(llt_p) - log_det_from_llt(llt_q);
  return 0.5 * (sol.trace() + quad - static_cast<double>(d) + log_det_ratio);
}

double kl_beta(const BetaDist& q, const BetaDist& p) {
  using boost::math::digamma;
  const double a = q.delta, b = q.gamma, c = p.delta, d = p.gamma;
  return log_beta_fn(c, d) - log_beta_fn(a, b) + (a - c) * digamma(a) +
         (b - d) * digamma(b) + (c - a + d - b) * digamma(a + b);
}

}  // namespace robed
