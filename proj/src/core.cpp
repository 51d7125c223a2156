// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#include "robed/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace robed {

Order::Order(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !(alpha <= 1.0)) {
    throw std::invalid_argument("Order: alpha must lie in (0, 1], got " +
                                std::to_string(alpha));
  }
}

double Order::beta() const {
  if (is_shannon()) return std::numeric_limits<double>::infinity();
  return alpha_ / (1.0 - alpha_);
}

void RegularityConstants::validate() const {
  const double fields[] = {l_f, l_h, c_h, sigma_h, sigma_w, l_w, c_w};
  for (double v : fields) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("RegularityConstants: fields must be >= 0");
    }
  }
  if (!(tau > 0.0)) {
    throw std::invalid_argument("RegularityConstants: tau must be > 0");
  }
}

namespace {

// splitmix64 finalizer; full-period bijective mixer.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Seed Seed::derive(std::uint64_t index) const {
  return Seed{mix64(root ^ mix64(index + 0x51'7c'c1'b7'27'22'0a'95ULL))};
}

Rng Seed::engine() const { return Rng(mix64(root)); }

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("log_sum_exp: empty input");
  }
  double vmax = -std::numeric_limits<double>::infinity();
  for (double v : values) {
    if (std::isnan(v)) {
      throw std::invalid_argument("log_sum_exp: NaN entry");
    }
    vmax = std::max(vmax, v);
  }
  if (!std::isfinite(vmax)) return vmax;  // all -inf (or +inf passthrough)
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - vmax);
  return vmax + std::log(acc);
}

double log_sum_exp(const std::vector<double>& values) {
  return log_sum_exp(std::span<const double>(values));
}

double beta_from_alpha(const Order& order) {
  if (order.is_shannon()) {
    throw std::domain_error("beta_from_alpha: beta is infinite at alpha = 1");
  }
  return order.alpha() / (1.0 - order.alpha());
}

double alpha_from_beta(double beta) { return beta / (1.0 + beta); }

Calibration calibrate_beta(const std::function<double(double)>& model_mi,
                           double rho, std::span<const double> grid) {
  if (grid.empty()) {
    throw std::invalid_argument("calibrate_beta: empty grid");
  }
  if (!(rho > 0.0)) {
    throw std::invalid_argument("calibrate_beta: rho must be > 0");
  }
  for (double b : grid) {
    if (!(b > 0.0)) {
      throw std::invalid_argument("calibrate_beta: grid entries must be > 0");
    }
  }
  double best_beta = grid.front();
  double best_value = -std::numeric_limits<double>::infinity();
  for (double b : grid) {
    const double v = model_mi(b) - b * rho;
    if (v > best_value) {  // strict: ties keep the smallest beta
      best_value = v;
      best_beta = b;
    }
  }
  return Calibration{best_beta, best_value};
}

double sample_gamma(Rng& rng, double shape) {
  std::gamma_distribution<double> g(shape, 1.0);
  return g(rng);
}

double sample_beta(Rng& rng, double a, double b) {
  const double x = sample_gamma(rng, a);
  const double y = sample_gamma(rng, b);
  return x / (x + y);
}

int sample_binomial(Rng& rng, int n, double p) {
  std::binomial_distribution<int> bin(n, p);
  return bin(rng);
}

}  // namespace robed
