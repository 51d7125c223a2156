// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "robed/renyi.hpp"
#include "support/oracles.hpp"

using namespace robed;

namespace {

GaussianDist gauss1(double mean, double var) {
  return GaussianDist(Eigen::VectorXd::Constant(1, mean),
                      Eigen::MatrixXd::Constant(1, 1, var));
}

GaussianDist random_gaussian(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd mean(d);
  for (int i = 0; i < d; ++i) mean(i) = normal(rng);
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = normal(rng);
  Eigen::MatrixXd cov = a * a.transpose() + 0.3 * Eigen::MatrixXd::Identity(d, d);
  return GaussianDist(mean, cov);
}

}  // namespace

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(BetaDist(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(BetaDist(1.0, -2.0), std::invalid_argument);

  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, 0.2, 1.0;
  CHECK_THROWS_AS(GaussianDist(Eigen::VectorXd::Zero(2), asym),
                  std::invalid_argument);
  Eigen::MatrixXd negdef(2, 2);
  negdef << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(GaussianDist(Eigen::VectorXd::Zero(2), negdef),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      GaussianDist(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(3, 3)),
      std::invalid_argument);
}

TEST_CASE("renyi_gaussian basics") {
  const GaussianDist q = gauss1(1.0, 1.0);
  const GaussianDist p = gauss1(0.0, 1.0);

  CHECK(renyi_gaussian(q, q, Order(0.5)) == doctest::Approx(0.0).epsilon(1e-12));
  // unit-variance mean shift at alpha = 1/2: alpha(1-alpha) m^2 / 2 = 1/4
  CHECK(renyi_gaussian(q, p, Order(0.5)) == doctest::Approx(0.25).epsilon(1e-12));

  std::mt19937_64 rng(7);
  CHECK_THROWS_AS(
      renyi_gaussian(random_gaussian(rng, 2), random_gaussian(rng, 3), Order(0.5)),
      std::invalid_argument);
}

TEST_CASE("renyi_gaussian matches 1-D quadrature") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mean_d(-2.0, 2.0);
  std::uniform_real_distribution<double> var_d(0.25, 4.0);
  std::uniform_real_distribution<double> alpha_d(0.05, 0.95);
  for (int rep = 0; rep < 25; ++rep) {
    const double mq = mean_d(rng), mp = mean_d(rng);
    const double vq = var_d(rng), vp = var_d(rng);
    const double a = alpha_d(rng);
    const double closed = renyi_gaussian(gauss1(mq, vq), gauss1(mp, vp), Order(a));
    const double reference = oracles::renyi_gaussian_quadrature(mq, vq, mp, vp, a);
    CHECK(closed == doctest::Approx(reference).epsilon(1e-8));
    CHECK(closed >= -1e-12);
  }
}

TEST_CASE("renyi_gaussian near alpha = 1 approaches the KL divergence") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 10; ++rep) {
    const GaussianDist q = random_gaussian(rng, 3);
    const GaussianDist p = random_gaussian(rng, 3);
    const double renyi = renyi_gaussian(q, p, Order(0.999));
    const double kl = kl_gaussian(q, p);
    CHECK(std::abs(renyi - kl) < 1e-2 * std::max(1.0, kl));
  }
  // spec tolerance on mild pairs
  const double renyi = renyi_gaussian(gauss1(0.8, 1.2), gauss1(-0.1, 0.9), Order(0.999));
  const double kl = kl_gaussian(gauss1(0.8, 1.2), gauss1(-0.1, 0.9));
  CHECK(std::abs(renyi - kl) < 1e-3);
}

TEST_CASE("renyi_beta basics and quadrature") {
  const BetaDist b22(2.0, 2.0);
  CHECK(renyi_beta(b22, b22, Order(0.5)) == doctest::Approx(0.0).epsilon(1e-12));

  // Beta(2,1) vs Beta(1,1) at alpha = 1/2: log(9/8)
  const double v = renyi_beta(BetaDist(2, 1), BetaDist(1, 1), Order(0.5));
  CHECK(v == doctest::Approx(std::log(9.0 / 8.0)).epsilon(1e-12));
  CHECK(v == doctest::Approx(0.1178).epsilon(1e-3));
  CHECK(v == doctest::Approx(oracles::renyi_beta_quadrature(
                BetaDist(2, 1), BetaDist(1, 1), 0.5))
                .epsilon(1e-8));

  // alpha -> 1 against KL by quadrature
  const double renyi = renyi_beta(BetaDist(3, 2), BetaDist(1, 1), Order(0.999));
  const double kl = oracles::kl_beta_quadrature(BetaDist(3, 2), BetaDist(1, 1));
  CHECK(std::abs(renyi - kl) < 1e-3);
  CHECK(kl_beta(BetaDist(3, 2), BetaDist(1, 1)) ==
        doctest::Approx(kl).epsilon(1e-8));

  // The mixture shapes reduce to alpha delta_q + (1-alpha) delta_p, a convex
  // combination, so valid inputs always stay in the admissible region.
  CHECK(std::isfinite(
      renyi_beta(BetaDist(0.05, 0.05), BetaDist(4.0, 0.1), Order(0.97))));
}

TEST_CASE("divergences are nonnegative, zero only at equality") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> shape(0.8, 6.0);
  std::uniform_real_distribution<double> alpha_d(0.05, 0.95);
  for (int rep = 0; rep < 40; ++rep) {
    const BetaDist q(shape(rng), shape(rng));
    const BetaDist p(shape(rng), shape(rng));
    const double a = alpha_d(rng);
    CHECK(renyi_beta(q, p, Order(a)) >= -1e-12);
    CHECK(renyi_beta(q, q, Order(a)) == doctest::Approx(0.0).epsilon(1e-12));

    const GaussianDist gq = random_gaussian(rng, 2);
    const GaussianDist gp = random_gaussian(rng, 2);
    CHECK(renyi_gaussian(gq, gp, Order(a)) >= -1e-12);
  }
}

TEST_CASE("renyi divergence is non-decreasing in alpha") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> shape(0.8, 5.0);
  const double alphas[] = {0.05, 0.2, 0.4, 0.6, 0.8, 0.95};
  for (int rep = 0; rep < 10; ++rep) {
    const BetaDist q(shape(rng), shape(rng));
    const BetaDist p(shape(rng), shape(rng));
    const GaussianDist gq = random_gaussian(rng, 2);
    const GaussianDist gp = random_gaussian(rng, 2);
    double prev_b = -1.0, prev_g = -1.0;
    for (double a : alphas) {
      const double db = renyi_beta(q, p, Order(a));
      const double dg = renyi_gaussian(gq, gp, Order(a));
      CHECK(db >= prev_b - 1e-10);
      CHECK(dg >= prev_g - 1e-10);
      prev_b = db;
      prev_g = dg;
    }
  }
}

TEST_CASE("kl_gaussian closed form") {
  CHECK(kl_gaussian(gauss1(0, 1), gauss1(0, 1)) == doctest::Approx(0.0));
  // unit variance mean shift: m^2 / 2
  CHECK(kl_gaussian(gauss1(1, 1), gauss1(0, 1)) == doctest::Approx(0.5));

  Eigen::VectorXd m(3);
  m << 0.3, -1.2, 0.5;
  const GaussianDist q(m, Eigen::MatrixXd::Identity(3, 3));
  const GaussianDist p(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3));
  CHECK(kl_gaussian(q, p) == doctest::Approx(m.squaredNorm() / 2.0));

  CHECK(kl_gaussian(gauss1(0.7, 1.8), gauss1(-0.4, 0.6)) ==
        doctest::Approx(oracles::kl_gaussian_quadrature(0.7, 1.8, -0.4, 0.6))
            .epsilon(1e-8));
}

TEST_CASE("alpha = 1 dispatches to the KL limit") {
  const GaussianDist q = gauss1(1.0, 2.0);
  const GaussianDist p = gauss1(0.0, 1.0);
  CHECK(renyi_gaussian(q, p, Order(1.0)) == kl_gaussian(q, p));
  CHECK(renyi_beta(BetaDist(3, 2), BetaDist(1, 1), Order(1.0)) ==
        kl_beta(BetaDist(3, 2), BetaDist(1, 1)));
}
