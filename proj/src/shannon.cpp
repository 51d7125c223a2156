// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#include "robed/shannon.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace robed {

EigValue shannon_eig_linreg(const LinRegModel& model,
                            const DesignBatch& batch) {
  if (batch.size() == 0) return {0.0, EigRepresentation::entropy_diff};
  const Eigen::MatrixXd h = design_matrix(model, batch);
  const Eigen::Index n = h.rows();
  const Eigen::MatrixXd m =
      (1.0 / model.noise_var) * (h * model.prior_cov * h.transpose()) +
      Eigen::MatrixXd::Identity(n, n);
  Eigen::LLT<Eigen::MatrixXd> llt(((m + m.transpose()) / 2.0).eval());
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("shannon_eig_linreg: factorization failed");
  }
  const double v = llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return {v, EigRepresentation::entropy_diff};
}

EigValue shannon_eig_abtest(const ABModel& model, const Allocation& alloc) {
  if (alloc.n_a + alloc.n_b > kEnumerationCap) {
    throw std::runtime_error("shannon_eig_abtest: budget beyond enumeration cap");
  }
  double total = 0.0;
  const BetaDist priors[2] = {model.prior_a, model.prior_b};
  const int counts[2] = {alloc.n_a, alloc.n_b};
  for (int k = 0; k < 2; ++k) {
    const BetaDist& prior = priors[k];
    const int n = counts[k];
    for (int x = 0; x <= n; ++x) {
      const double lp = std::lgamma(n + 1.0) - std::lgamma(x + 1.0) -
                        std::lgamma(n - x + 1.0) +
                        log_beta_fn(prior.delta + x, prior.gamma + n - x) -
                        log_beta_fn(prior.delta, prior.gamma);
      const BetaDist post(prior.delta + x, prior.gamma + n - x);
      total += std::exp(lp) * kl_beta(post, prior);
    }
  }
  return {total, EigRepresentation::param_div};
}

}  // namespace robed
