// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#include "robed/linreg.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace robed {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error(std::string(what) + ": matrix not SPD");
  }
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
  return ((inv + inv.transpose()) / 2.0).eval();
}

// Sigma_theta(alpha) = [Sigma_0^-1 + (alpha/sigma^2) H^T H]^-1 and the
// matching mean given outcomes x.
GaussianDist tempered_update(const LinRegModel& model, const Eigen::MatrixXd& h,
                             const Eigen::VectorXd& x, double alpha) {
  const Eigen::MatrixXd prior_prec = spd_inverse(model.prior_cov, "linreg");
  const Eigen::MatrixXd prec =
      prior_prec + (alpha / model.noise_var) * (h.transpose() * h);
  const Eigen::MatrixXd cov = spd_inverse(prec, "linreg posterior");
  const Eigen::VectorXd mean =
      cov * (prior_prec * model.prior_mean +
             (alpha / model.noise_var) * (h.transpose() * x));
  return GaussianDist(mean, cov);
}

}  // namespace

LinRegModel::LinRegModel(Eigen::VectorXd mu0, Eigen::MatrixXd sigma0,
                         double sigma2, Eigen::VectorXd lo, Eigen::VectorXd hi)
    : prior_mean(std::move(mu0)),
      prior_cov(std::move(sigma0)),
      noise_var(sigma2),
      box_lo(std::move(lo)),
      box_hi(std::move(hi)) {
  if (!(noise_var > 0.0)) {
    throw std::invalid_argument("LinRegModel: noise_var must be > 0");
  }
  if (box_lo.size() != box_hi.size()) {
    throw std::invalid_argument("LinRegModel: box bounds length mismatch");
  }
  for (Eigen::Index i = 0; i < box_lo.size(); ++i) {
    if (!(box_lo[i] < box_hi[i])) {
      throw std::invalid_argument("LinRegModel: box lower must be < upper");
    }
  }
  GaussianDist(prior_mean, prior_cov);  // validates SPD prior
}

LinRegModel LinRegModel::with_default_box(Eigen::VectorXd mu0,
                                          Eigen::MatrixXd sigma0,
                                          double sigma2, int design_dim) {
  return LinRegModel(std::move(mu0), std::move(sigma0), sigma2,
                     Eigen::VectorXd::Constant(design_dim, -1.0),
                     Eigen::VectorXd::Constant(design_dim, 1.0));
}

DesignBatch scalar_batch(const std::vector<double>& xis) {
  DesignBatch batch;
  batch.map = FeatureMap::affine;
  batch.designs.reserve(xis.size());
  for (double v : xis) {
    batch.designs.push_back(Eigen::VectorXd::Constant(1, v));
  }
  return batch;
}

Eigen::MatrixXd design_matrix(const LinRegModel& model,
                              const DesignBatch& batch) {
  const Eigen::Index d = model.param_dim();
  Eigen::MatrixXd h(static_cast<Eigen::Index>(batch.size()), d);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Eigen::VectorXd& xi = batch.designs[i];
    if (xi.size() != model.design_dim()) {
      throw std::invalid_argument("design_matrix: design dimension mismatch");
    }
    for (Eigen::Index k = 0; k < xi.size(); ++k) {
      if (xi[k] < model.box_lo[k] || xi[k] > model.box_hi[k]) {
        throw std::invalid_argument("design_matrix: design outside box");
      }
    }
    if (batch.map == FeatureMap::affine) {
      if (xi.size() + 1 != d) {
        throw std::invalid_argument("design_matrix: affine map needs d-1 design dims");
      }
      h.row(i).head(xi.size()) = xi.transpose();
      h(i, d - 1) = 1.0;
    } else {
      if (xi.size() != d) {
        throw std::invalid_argument("design_matrix: identity map needs d design dims");
      }
      h.row(i) = xi.transpose();
    }
  }
  return h;
}

GaussianDist posterior(const LinRegModel& model, const DesignBatch& batch,
                       const Eigen::VectorXd& outcomes) {
  if (static_cast<std::size_t>(outcomes.size()) != batch.size()) {
    throw std::invalid_argument("posterior: outcome length mismatch");
  }
  if (batch.size() == 0) return GaussianDist(model.prior_mean, model.prior_cov);
  return tempered_update(model, design_matrix(model, batch), outcomes, 1.0);
}

GaussianDist tilted_posterior(const LinRegModel& model,
                              const DesignBatch& batch,
                              const Eigen::VectorXd& outcomes,
                              const Order& order) {
  if (static_cast<std::size_t>(outcomes.size()) != batch.size()) {
    throw std::invalid_argument("tilted_posterior: outcome length mismatch");
  }
  if (batch.size() == 0) return GaussianDist(model.prior_mean, model.prior_cov);
  return tempered_update(model, design_matrix(model, batch), outcomes,
                         order.alpha());
}

GaussianDist tilted_marginal(const LinRegModel& model,
                             const DesignBatch& batch, const Order& order) {
  const Eigen::MatrixXd h = design_matrix(model, batch);
  const Eigen::Index n = h.rows();
  Eigen::MatrixXd cov = order.alpha() * (h * model.prior_cov * h.transpose()) +
                        model.noise_var * Eigen::MatrixXd::Identity(n, n);
  cov = ((cov + cov.transpose()) / 2.0).eval();
  return GaussianDist(h * model.prior_mean, cov);
}

double sibson_mi(const LinRegModel& model, const DesignBatch& batch,
                 const Order& order) {
  if (batch.size() == 0) return 0.0;
  const Eigen::MatrixXd h = design_matrix(model, batch);
  const Eigen::Index n = h.rows();
  const Eigen::MatrixXd m =
      (order.alpha() / model.noise_var) * (h * model.prior_cov * h.transpose()) +
      Eigen::MatrixXd::Identity(n, n);
  Eigen::LLT<Eigen::MatrixXd> llt(((m + m.transpose()) / 2.0).eval());
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("sibson_mi: factorization failed");
  }
  return llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

std::vector<JointSample> sample_worst_case(const LinRegModel& model,
                                           const DesignBatch& batch,
                                           const Order& order, int count,
                                           Seed seed) {
  if (count < 1) {
    throw std::invalid_argument("sample_worst_case: count must be >= 1");
  }
  const double a = order.alpha();
  const Eigen::Index d = model.param_dim();
  const Eigen::MatrixXd h = design_matrix(model, batch);
  const Eigen::Index n = h.rows();

  // Worst-case posterior covariance with x-free precision.
  const Eigen::MatrixXd prior_prec = spd_inverse(model.prior_cov, "linreg");
  const Eigen::MatrixXd tilted_cov = spd_inverse(
      prior_prec + (a / model.noise_var) * (h.transpose() * h), "linreg");

  Eigen::MatrixXd joint_cov(d + n, d + n);
  joint_cov.topLeftCorner(d, d) = a * model.prior_cov + (1.0 - a) * tilted_cov;
  joint_cov.topRightCorner(d, n) = a * model.prior_cov * h.transpose();
  joint_cov.bottomLeftCorner(n, d) = a * h * model.prior_cov;
  joint_cov.bottomRightCorner(n, n) =
      a * (h * model.prior_cov * h.transpose()) +
      model.noise_var * Eigen::MatrixXd::Identity(n, n);
  joint_cov = ((joint_cov + joint_cov.transpose()) / 2.0).eval();

  Eigen::LLT<Eigen::MatrixXd> llt(joint_cov);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("sample_worst_case: joint covariance not SPD");
  }
  const Eigen::MatrixXd chol = llt.matrixL();

  Eigen::VectorXd joint_mean(d + n);
  joint_mean.head(d) = model.prior_mean;
  joint_mean.tail(n) = h * model.prior_mean;

  Rng rng = seed.engine();
  std::normal_distribution<double> std_normal(0.0, 1.0);
  std::vector<JointSample> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    Eigen::VectorXd z(d + n);
    for (Eigen::Index k = 0; k < d + n; ++k) z[k] = std_normal(rng);
    const Eigen::VectorXd draw = joint_mean + chol * z;
    out.push_back(JointSample{draw.head(d), draw.tail(n)});
  }
  return out;
}

double conditional_gain(const LinRegModel& model, const DesignBatch& batch,
                        const Eigen::VectorXd& outcomes, const Order& order) {
  const GaussianDist post = posterior(model, batch, outcomes);
  const GaussianDist prior(model.prior_mean, model.prior_cov);
  return renyi_gaussian(post, prior, order);
}

double log_predictive_density(const LinRegModel& model,
                              const GaussianDist& posterior_dist,
                              const DesignBatch& test_batch,
                              const Eigen::VectorXd& test_outcomes) {
  if (static_cast<std::size_t>(test_outcomes.size()) != test_batch.size()) {
    throw std::invalid_argument("log_predictive_density: length mismatch");
  }
  if (posterior_dist.dim() != model.param_dim()) {
    throw std::invalid_argument("log_predictive_density: posterior dim mismatch");
  }
  const Eigen::MatrixXd h = design_matrix(model, test_batch);
  double total = 0.0;
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    const Eigen::VectorXd row = h.row(i).transpose();
    const double mean = row.dot(posterior_dist.mean);
    const double var = row.dot(posterior_dist.cov * row) + model.noise_var;
    const double resid = test_outcomes[i] - mean;
    total += -0.5 * std::log(kTwoPi * var) - 0.5 * resid * resid / var;
  }
  return total;
}

}  // namespace robed
