// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "robed/abtest.hpp"
#include "robed/csv.hpp"
#include "robed/linreg.hpp"

namespace robed {

/// Flat experiment configuration; mirrors the JSON schema one to one.
struct ExperimentConfig {
  std::string model = "linreg";  // "linreg" | "abtest"

  double alpha = 0.5;
  // Order of the worst-case process generating the data. Defaults to
  // `alpha`; experiments probing mismatched hedging set it separately.
  double data_alpha = 0.0;  // <= 0 means: use alpha

  int trials = 1000;
  int outer_n = 100;
  int inner_m = 64;
  double lambda = 100.0;
  double delta = 0.05;
  std::uint64_t seed = 0;
  std::string output = "out.csv";
  int threads = 1;

  // linreg family
  int dim = 2;                        // parameter dimension
  std::string feature_map = "affine"; // "affine" | "identity"
  double noise_var = 1.0;
  double prior_scale = 1.0;           // Sigma_0 = prior_scale * I
  int batch = 5;                      // measurements per trial
  int design_grid = 201;              // scalar-design scan resolution

  // abtest family
  int nx = 25;
  double prior_delta_a = 1.0, prior_gamma_a = 1.0;
  double prior_delta_b = 1.0, prior_gamma_b = 1.0;

  // coverage
  std::vector<double> levels = {0.5, 0.8};

  // elpd
  std::vector<double> alphas = {0.05, 0.1, 0.5};
  int test_points = 10;

  // regret
  int reps = 256;
  int naive_iters = 100;
  double naive_step = 0.1;
  double fd_step = 0.1;
  int md_steps = 400;
  int md_batch = 32;
  double md_mean_step = 0.4;
  double md_log_std_step = 0.04;
  double md_final_scale = 0.05;
  double md_prior_std = 0.1;
  int policy_samples = 1000;

  double effective_data_alpha() const {
    return data_alpha > 0.0 ? data_alpha : alpha;
  }

  static ExperimentConfig from_json_file(const std::string& path);
  static ExperimentConfig from_json_string(const std::string& text);
  std::string to_json_string() const;
};

LinRegModel linreg_from_config(const ExperimentConfig& config);
FeatureMap feature_map_from_config(const ExperimentConfig& config);
ABModel abtest_from_config(const ExperimentConfig& config);

/// Scalar design maximizing the closed-form gain over the scan grid;
/// ties break toward the smaller design value.
double optimal_scalar_design(const LinRegModel& model, int batch_size,
                             int grid, const Order& order);
int optimal_allocation(const ABModel& model, const Order& order);

/// Realized-gain study: per trial, worst-case draws at the nominal-optimal
/// and robust-optimal designs with the respective realized gains.
Table run_infogain(const ExperimentConfig& config);

/// Credible-set coverage study for nominal and tilted posteriors under
/// worst-case data. Indicator columns are {0,1}-valued.
Table run_coverage(const ExperimentConfig& config,
                   const std::vector<double>& levels);

struct CoverageSummary {
  std::string kind;  // "nominal" | "tilted"
  double level;
  double coverage;
};

std::vector<CoverageSummary> summarize_coverage(
    const Table& table, const std::vector<double>& levels);

/// Held-out log-predictive study across orders and design rules
/// ("random" vs "optimal").
Table run_elpd(const ExperimentConfig& config,
               const std::vector<double>& alphas);

/// Naive estimator-driven optimization against the PAC-Bayes policy,
/// scored by closed-form regret; one row per repetition.
Table run_regret(const ExperimentConfig& config);

}  // namespace robed
