// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "robed/core.hpp"
#include "robed/linreg.hpp"

using namespace robed;

TEST_CASE("Order accepts (0, 1] and rejects the rest") {
  CHECK_THROWS_AS(Order(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Order(-0.2), std::invalid_argument);
  CHECK_THROWS_AS(Order(1.5), std::invalid_argument);
  CHECK_THROWS_AS(Order(std::nan("")), std::invalid_argument);
  CHECK(Order(0.5).alpha() == 0.5);
  CHECK(Order(1.0).is_shannon());
  CHECK(std::isinf(Order(1.0).beta()));
  CHECK(Order(0.5).beta() == doctest::Approx(1.0));
}

TEST_CASE("beta_from_alpha and its inverse") {
  CHECK(beta_from_alpha(Order(0.5)) == doctest::Approx(1.0));
  CHECK(beta_from_alpha(Order(0.9)) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK_THROWS_AS(beta_from_alpha(Order(1.0)), std::domain_error);

  const double a = 0.123;
  CHECK(std::abs(alpha_from_beta(beta_from_alpha(Order(a))) - a) < 1e-12);

  // strictly increasing on (0, 1)
  double prev = 0.0;
  for (double x = 0.05; x < 1.0; x += 0.05) {
    const double b = beta_from_alpha(Order(x));
    CHECK(b > prev);
    prev = b;
  }
}

TEST_CASE("log_sum_exp examples") {
  CHECK(log_sum_exp({std::vector<double>{0.0, 0.0}}) ==
        doctest::Approx(std::log(2.0)));
  CHECK(log_sum_exp({std::vector<double>{-1000.0, -1000.0}}) ==
        doctest::Approx(-1000.0 + std::log(2.0)));
  // direct summation at safe magnitude
  const double direct = std::log(std::exp(1.0) + std::exp(2.0) + std::exp(3.0));
  CHECK(log_sum_exp({std::vector<double>{1.0, 2.0, 3.0}}) ==
        doctest::Approx(direct).epsilon(1e-12));
  CHECK(direct == doctest::Approx(3.40760596444438).epsilon(1e-10));

  CHECK_THROWS_AS(log_sum_exp(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(log_sum_exp(std::vector<double>{0.0, std::nan("")}),
                  std::invalid_argument);
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(log_sum_exp(std::vector<double>{ninf, ninf}) == ninf);
  CHECK(log_sum_exp(std::vector<double>{ninf, 0.0}) == doctest::Approx(0.0));
}

TEST_CASE("log_sum_exp properties: permutation and shift invariance") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> v(10);
    for (auto& x : v) x = unif(rng);
    const double base = log_sum_exp(v);

    std::vector<double> shuffled = v;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(log_sum_exp(shuffled) == doctest::Approx(base).epsilon(1e-13));

    const double c = unif(rng);
    std::vector<double> shifted = v;
    for (auto& x : shifted) x += c;
    CHECK(log_sum_exp(shifted) == doctest::Approx(base + c).epsilon(1e-12));
  }
}

TEST_CASE("calibrate_beta edge behavior") {
  std::vector<double> grid;
  for (int i = 1; i <= 50; ++i) grid.push_back(0.2 * i);

  // constant objective: the penalty picks the smallest beta
  const auto constant = calibrate_beta([](double) { return 3.0; }, 0.7, grid);
  CHECK(constant.beta_star == doctest::Approx(grid.front()));
  CHECK(constant.value == doctest::Approx(3.0 - 0.7 * grid.front()));

  // vanishing penalty with increasing objective: largest beta wins
  const auto increasing =
      calibrate_beta([](double b) { return b; }, 1e-12, grid);
  CHECK(increasing.beta_star == doctest::Approx(grid.back()));

  CHECK_THROWS_AS(
      calibrate_beta([](double b) { return b; }, 0.5, std::vector<double>{}),
      std::invalid_argument);
  CHECK_THROWS_AS(calibrate_beta([](double b) { return b; }, 0.5,
                                 std::vector<double>{-1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(calibrate_beta([](double b) { return b; }, 0.0, grid),
                  std::invalid_argument);
}

TEST_CASE("calibrate_beta against an exhaustive scan on the regression model") {
  const auto model = LinRegModel::with_default_box(
      Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2), 1.0, 1);
  const DesignBatch batch = scalar_batch({1.0});
  const auto mi = [&](double beta) {
    return sibson_mi(model, batch, Order(alpha_from_beta(beta)));
  };

  std::vector<double> grid;
  for (int i = 0; i < 100; ++i) grid.push_back(0.1 + (10.0 - 0.1) * i / 99.0);
  const double rho = 0.1;
  const auto result = calibrate_beta(mi, rho, grid);

  double best_val = -std::numeric_limits<double>::infinity();
  double best_beta = grid.front();
  for (double b : grid) {
    const double v = mi(b) - b * rho;
    if (v > best_val) {
      best_val = v;
      best_beta = b;
    }
  }
  CHECK(result.beta_star == doctest::Approx(best_beta));
  CHECK(result.value == doctest::Approx(best_val));
}

TEST_CASE("seed streams are pure functions of (root, index)") {
  const Seed root{12345};
  CHECK(root.derive(7).root == root.derive(7).root);
  CHECK(root.derive(7).root != root.derive(8).root);
  CHECK(root.derive(7).root != Seed{12346}.derive(7).root);

  Rng a = root.derive(3).engine();
  Rng b = root.derive(3).engine();
  for (int i = 0; i < 16; ++i) CHECK(a() == b());
}

TEST_CASE("regularity constants validation") {
  RegularityConstants c;
  CHECK_NOTHROW(c.validate());
  c.tau = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.tau = 1.0;
  c.sigma_w = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
