// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace robed {

/// splitmix64 generator. Single-word state makes per-index stream
/// construction cheap, which the estimator relies on (one derived stream
/// per outer sample).
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ULL; }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

using Rng = SplitMix64;

/// Misspecification order alpha in (0, 1]. alpha = 1 is the Shannon limit;
/// its dual multiplier beta = alpha / (1 - alpha) is then infinite.
class Order {
 public:
  explicit Order(double alpha);

  double alpha() const { return alpha_; }
  bool is_shannon() const { return alpha_ == 1.0; }
  /// Dual multiplier; +inf at the Shannon limit.
  double beta() const;

 private:
  double alpha_;
};

/// Regularity constants of the estimator analysis. Never instantiated by
/// theory; supplied as configuration inputs.
struct RegularityConstants {
  double l_f = 1.0;
  double l_h = 1.0;
  double c_h = 1.0;
  double sigma_h = 1.0;
  double sigma_w = 1.0;
  double l_w = 1.0;
  double c_w = 1.0;
  double tau = 1.0;

  void validate() const;
};

/// Root seed with pure per-index stream derivation, so parallel execution
/// order cannot change results.
struct Seed {
  std::uint64_t root = 0;

  Seed derive(std::uint64_t index) const;
  Rng engine() const;
};

/// log sum_k exp(v_k), max-shifted. Entries may be -inf, never NaN.
double log_sum_exp(std::span<const double> values);
double log_sum_exp(const std::vector<double>& values);

/// beta = alpha / (1 - alpha); throws at the Shannon limit.
double beta_from_alpha(const Order& order);
double alpha_from_beta(double beta);

struct Calibration {
  double beta_star;
  double value;
};

/// Grid maximizer of model_mi(beta) - beta * rho; ties break to the
/// smallest beta.
Calibration calibrate_beta(const std::function<double(double)>& model_mi,
                           double rho, std::span<const double> grid);

// Sampling helpers shared by the model modules. All consume an explicit
// engine; determinism is the caller's contract.
double sample_gamma(Rng& rng, double shape);
double sample_beta(Rng& rng, double a, double b);
int sample_binomial(Rng& rng, int n, double p);

}  // namespace robed
