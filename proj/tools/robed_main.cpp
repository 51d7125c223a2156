// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0
//
// robed: closed-form and estimated robust information gains, plus the
// batch experiment drivers. All information values are printed in nats.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "robed/harness.hpp"
#include "robed/nmc.hpp"
#include "robed/shannon.hpp"

namespace {

using namespace robed;

std::vector<double> split_doubles(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

void print_value(const char* name, double value) {
  std::printf("%s=%.17g\n", name, value);
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ROBED_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

struct ModelFlags {
  std::string model = "linreg";
  double alpha = 0.5;
  // linreg
  int dim = 2;
  std::string feature_map = "affine";
  double noise_var = 1.0;
  double prior_scale = 1.0;
  std::string design = "1";
  // abtest
  int nx = 25;
  int na = 0;
  std::string priors = "1,1,1,1";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--model", model, "model family: linreg | abtest");
    cmd->add_option("--alpha", alpha, "misspecification order in (0, 1]");
    cmd->add_option("--dim", dim, "linreg parameter dimension");
    cmd->add_option("--feature-map", feature_map, "linreg map: affine | identity");
    cmd->add_option("--noise-var", noise_var, "linreg noise variance");
    cmd->add_option("--prior-scale", prior_scale, "linreg prior covariance scale");
    cmd->add_option("--design", design,
                    "linreg design: comma list (affine: scalar designs; "
                    "identity: one vector)");
    cmd->add_option("--nx", nx, "abtest total budget N_x");
    cmd->add_option("--na", na, "abtest allocation n_a");
    cmd->add_option("--priors", priors, "abtest priors delta_a,gamma_a,delta_b,gamma_b");
  }

  ExperimentConfig to_config() const {
    ExperimentConfig c;
    c.model = model;
    c.alpha = alpha;
    c.dim = dim;
    c.feature_map = feature_map;
    c.noise_var = noise_var;
    c.prior_scale = prior_scale;
    c.nx = nx;
    const auto p = split_doubles(priors);
    if (p.size() != 4) throw std::invalid_argument("--priors needs 4 values");
    c.prior_delta_a = p[0];
    c.prior_gamma_a = p[1];
    c.prior_delta_b = p[2];
    c.prior_gamma_b = p[3];
    return c;
  }

  DesignBatch linreg_batch(const ExperimentConfig& c) const {
    const auto values = split_doubles(design);
    if (values.empty()) throw std::invalid_argument("--design must be non-empty");
    if (feature_map_from_config(c) == FeatureMap::affine) {
      return scalar_batch(values);
    }
    DesignBatch batch;
    batch.map = FeatureMap::identity;
    batch.designs.push_back(Eigen::Map<const Eigen::VectorXd>(
        values.data(), Eigen::Index(values.size())));
    return batch;
  }

  Eigen::VectorXd design_vector() const {
    const auto values = split_doubles(design);
    return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                             Eigen::Index(values.size()));
  }
};

double closed_form_mi(const ModelFlags& flags, double alpha) {
  const ExperimentConfig c = flags.to_config();
  if (flags.model == "linreg") {
    return sibson_mi(linreg_from_config(c), flags.linreg_batch(c), Order(alpha));
  }
  if (flags.model == "abtest") {
    const ABModel model = abtest_from_config(c);
    return sibson_mi(model, allocation(model, flags.na), Order(alpha));
  }
  throw std::invalid_argument("unknown model: " + flags.model);
}

int run_experiment(const std::string& name, const ExperimentConfig& config) {
  Table table;
  if (name == "infogain") {
    table = run_infogain(config);
  } else if (name == "coverage") {
    table = run_coverage(config, config.levels);
    for (const auto& s : summarize_coverage(table, config.levels)) {
      std::fprintf(stderr, "# coverage %s level %g: %.4f\n", s.kind.c_str(),
                   s.level, s.coverage);
    }
  } else if (name == "elpd") {
    table = run_elpd(config, config.alphas);
  } else if (name == "regret") {
    table = run_regret(config);
  } else {
    throw std::invalid_argument("unknown experiment: " + name);
  }
  write_csv(table, config.output);
  std::printf("%s\n", config.output.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust Bayesian experimental design toolkit"};
  app.require_subcommand(1);

  ModelFlags mi_flags;
  auto* mi_cmd = app.add_subcommand("mi", "closed-form Sibson alpha-MI");
  mi_flags.add_to(mi_cmd);

  ModelFlags est_flags;
  int est_n = 1000, est_m = 128;
  std::uint64_t est_seed = default_seed();
  bool est_exact = false;
  auto* est_cmd = app.add_subcommand("estimate", "nested Monte Carlo estimate");
  est_flags.add_to(est_cmd);
  est_cmd->add_option("--n", est_n, "outer sample budget N");
  est_cmd->add_option("--m", est_m, "inner sample budget M");
  est_cmd->add_option("--seed", est_seed, "root seed");
  est_cmd->add_flag("--exact", est_exact, "use the closed-form marginal ratio");

  ModelFlags cal_flags;
  double cal_rho = 0.1, cal_grid_min = 0.1, cal_grid_max = 10.0;
  int cal_grid_size = 100;
  auto* cal_cmd =
      app.add_subcommand("calibrate", "beta* from a misspecification budget rho");
  cal_flags.add_to(cal_cmd);
  cal_cmd->add_option("--rho", cal_rho, "misspecification budget > 0");
  cal_cmd->add_option("--grid-min", cal_grid_min, "smallest beta on the grid");
  cal_cmd->add_option("--grid-max", cal_grid_max, "largest beta on the grid");
  cal_cmd->add_option("--grid-size", cal_grid_size, "grid resolution");

  const std::vector<std::string> experiments = {"infogain", "coverage", "elpd",
                                                "regret"};
  struct ExperimentArgs {
    CLI::App* cmd;
    std::string config_path;
    ExperimentConfig overrides;
    std::string levels, alphas;
  };
  std::vector<ExperimentArgs> exp_args(experiments.size());
  for (std::size_t i = 0; i < experiments.size(); ++i) {
    auto& a = exp_args[i];
    a.cmd = app.add_subcommand(experiments[i],
                               "batch experiment writing CSV output");
    a.cmd->add_option("--config", a.config_path, "flat JSON config file");
    a.cmd->add_option("--model", a.overrides.model);
    a.cmd->add_option("--alpha", a.overrides.alpha);
    a.cmd->add_option("--data-alpha", a.overrides.data_alpha);
    a.cmd->add_option("--trials", a.overrides.trials);
    a.cmd->add_option("--n", a.overrides.outer_n);
    a.cmd->add_option("--m", a.overrides.inner_m);
    a.cmd->add_option("--lambda", a.overrides.lambda);
    a.cmd->add_option("--delta", a.overrides.delta);
    a.cmd->add_option("--seed", a.overrides.seed);
    a.cmd->add_option("--output", a.overrides.output);
    a.cmd->add_option("--threads", a.overrides.threads);
    a.cmd->add_option("--dim", a.overrides.dim);
    a.cmd->add_option("--feature-map", a.overrides.feature_map);
    a.cmd->add_option("--noise-var", a.overrides.noise_var);
    a.cmd->add_option("--prior-scale", a.overrides.prior_scale);
    a.cmd->add_option("--batch", a.overrides.batch);
    a.cmd->add_option("--nx", a.overrides.nx);
    a.cmd->add_option("--levels", a.levels);
    a.cmd->add_option("--alphas", a.alphas);
    a.cmd->add_option("--test-points", a.overrides.test_points);
    a.cmd->add_option("--reps", a.overrides.reps);
    a.cmd->add_option("--md-steps", a.overrides.md_steps);
    a.cmd->add_option("--md-batch", a.overrides.md_batch);
    a.cmd->add_option("--naive-iters", a.overrides.naive_iters);
    a.cmd->add_option("--policy-samples", a.overrides.policy_samples);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // usage text, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (mi_cmd->parsed()) {
      print_value("mi", closed_form_mi(mi_flags, mi_flags.alpha));
      return 0;
    }
    if (est_cmd->parsed()) {
      const ExperimentConfig c = est_flags.to_config();
      NmcConfig config(est_n, est_m, Order(est_flags.alpha));
      config.exact_ratio = est_exact;
      double value;
      if (est_flags.model == "linreg") {
        const LinRegGenerative gen(linreg_from_config(c),
                                   feature_map_from_config(c));
        value = estimate(gen, est_flags.design_vector(), config, Seed{est_seed});
      } else if (est_flags.model == "abtest") {
        const ABTestGenerative gen(abtest_from_config(c));
        value = estimate(gen, Eigen::VectorXd::Constant(1, double(est_flags.na)),
                         config, Seed{est_seed});
      } else {
        throw std::invalid_argument("unknown model: " + est_flags.model);
      }
      print_value("estimate", value);
      std::fprintf(stderr, "# N=%d M=%d seed=%llu\n", est_n, est_m,
                   static_cast<unsigned long long>(est_seed));
      return 0;
    }
    if (cal_cmd->parsed()) {
      if (cal_grid_size < 1 || !(cal_grid_min > 0.0) ||
          !(cal_grid_max >= cal_grid_min)) {
        throw std::invalid_argument("calibrate: invalid grid");
      }
      std::vector<double> grid(cal_grid_size);
      for (int i = 0; i < cal_grid_size; ++i) {
        grid[i] = cal_grid_size == 1
                      ? cal_grid_min
                      : cal_grid_min + (cal_grid_max - cal_grid_min) * i /
                                           (cal_grid_size - 1);
      }
      const auto result = calibrate_beta(
          [&](double beta) {
            return closed_form_mi(cal_flags, alpha_from_beta(beta));
          },
          cal_rho, grid);
      print_value("beta_star", result.beta_star);
      print_value("alpha_star", alpha_from_beta(result.beta_star));
      return 0;
    }
    for (std::size_t i = 0; i < experiments.size(); ++i) {
      auto& a = exp_args[i];
      if (!a.cmd->parsed()) continue;
      ExperimentConfig config;
      if (!a.config_path.empty()) {
        config = ExperimentConfig::from_json_file(a.config_path);
      }
      // Flags override config-file values.
      const auto take = [&](const char* flag, auto member) {
        if (a.cmd->count(flag) > 0) config.*member = a.overrides.*member;
      };
      take("--model", &ExperimentConfig::model);
      take("--alpha", &ExperimentConfig::alpha);
      take("--data-alpha", &ExperimentConfig::data_alpha);
      take("--trials", &ExperimentConfig::trials);
      take("--n", &ExperimentConfig::outer_n);
      take("--m", &ExperimentConfig::inner_m);
      take("--lambda", &ExperimentConfig::lambda);
      take("--delta", &ExperimentConfig::delta);
      take("--seed", &ExperimentConfig::seed);
      take("--output", &ExperimentConfig::output);
      take("--threads", &ExperimentConfig::threads);
      take("--dim", &ExperimentConfig::dim);
      take("--feature-map", &ExperimentConfig::feature_map);
      take("--noise-var", &ExperimentConfig::noise_var);
      take("--prior-scale", &ExperimentConfig::prior_scale);
      take("--batch", &ExperimentConfig::batch);
      take("--nx", &ExperimentConfig::nx);
      take("--test-points", &ExperimentConfig::test_points);
      take("--reps", &ExperimentConfig::reps);
      take("--md-steps", &ExperimentConfig::md_steps);
      take("--md-batch", &ExperimentConfig::md_batch);
      take("--naive-iters", &ExperimentConfig::naive_iters);
      take("--policy-samples", &ExperimentConfig::policy_samples);
      if (a.cmd->count("--levels") > 0) config.levels = split_doubles(a.levels);
      if (a.cmd->count("--alphas") > 0) config.alphas = split_doubles(a.alphas);
      if (a.cmd->count("--seed") == 0 && a.config_path.empty()) {
        config.seed = default_seed();
      }
      return run_experiment(experiments[i], config);
    }
    throw std::invalid_argument("no subcommand selected");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
