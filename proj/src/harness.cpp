// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#include "robed/harness.hpp"

#include <json.hpp>

#include <Eigen/Cholesky>
#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "robed/nmc.hpp"
#include "robed/policy.hpp"
#include "robed/shannon.hpp"

namespace robed {

namespace {

using json = nlohmann::json;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::string join_double_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", values[i]);
    out += buf;
  }
  return out;
}

std::vector<double> read_list(const json& j, const char* key,
                              std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  if (j.at(key).is_string()) return parse_double_list(j.at(key).get<std::string>());
  return j.at(key).get<std::vector<double>>();
}

/// Runs fn(0..count-1), chunked over `threads` workers. Each index writes
/// only its own slot, so the schedule cannot change results.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || count < 2) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      int i;
      while ((i = next.fetch_add(1)) < count) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

DesignBatch repeated_scalar_batch(double xi, int copies) {
  return scalar_batch(std::vector<double>(copies, xi));
}

DesignBatch batch_for(const ExperimentConfig& config, const LinRegModel& model,
                      double scalar_design) {
  (void)model;
  return repeated_scalar_batch(scalar_design, config.batch);
}

/// Conditional law of the outcomes given theta under the worst-case joint;
/// used to draw held-out data consistent with a trial's parameter.
GaussianDist worst_case_outcome_given_theta(const LinRegModel& model,
                                            const DesignBatch& batch,
                                            const Order& order,
                                            const Eigen::VectorXd& theta) {
  const double a = order.alpha();
  const Eigen::MatrixXd h = design_matrix(model, batch);
  const Eigen::Index n = h.rows();

  const Eigen::MatrixXd prior_prec =
      Eigen::LLT<Eigen::MatrixXd>(model.prior_cov)
          .solve(Eigen::MatrixXd::Identity(model.param_dim(), model.param_dim()));
  const Eigen::MatrixXd tilted_cov =
      Eigen::LLT<Eigen::MatrixXd>(
          (prior_prec + (a / model.noise_var) * (h.transpose() * h)).eval())
          .solve(Eigen::MatrixXd::Identity(model.param_dim(), model.param_dim()));

  const Eigen::MatrixXd block_theta =
      a * model.prior_cov + (1.0 - a) * tilted_cov;
  const Eigen::MatrixXd cross = a * model.prior_cov * h.transpose();  // d x n
  const Eigen::MatrixXd block_x =
      a * (h * model.prior_cov * h.transpose()) +
      model.noise_var * Eigen::MatrixXd::Identity(n, n);

  const Eigen::LLT<Eigen::MatrixXd> llt_theta(
      ((block_theta + block_theta.transpose()) / 2.0).eval());
  const Eigen::VectorXd mean =
      h * model.prior_mean +
      cross.transpose() * llt_theta.solve(theta - model.prior_mean);
  Eigen::MatrixXd cov = block_x - cross.transpose() * llt_theta.solve(cross);
  cov = ((cov + cov.transpose()) / 2.0).eval();
  return GaussianDist(mean, cov);
}

Eigen::VectorXd draw_gaussian(const GaussianDist& dist, Rng& rng) {
  Eigen::LLT<Eigen::MatrixXd> llt(dist.cov);
  std::normal_distribution<double> std_normal(0.0, 1.0);
  Eigen::VectorXd z(dist.dim());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = std_normal(rng);
  return dist.mean + llt.matrixL() * z;
}

/// q*(x | theta) on the outcome grid: proportional to
/// p_alpha(x)^{1-alpha} p(x | theta)^alpha.
ABOutcome draw_worst_case_outcome_given_theta(const ABModel& model,
                                              const Allocation& alloc,
                                              const Order& order,
                                              double theta_a, double theta_b,
                                              Rng& rng) {
  const double a = order.alpha();
  const std::vector<double> pmf = tilted_marginal_pmf(model, alloc, order);
  const std::vector<ABOutcome> grid = outcome_grid(alloc);
  std::vector<double> logits(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const ABOutcome& x = grid[i];
    double ll = 0.0;
    const int ns[2] = {alloc.n_a, alloc.n_b};
    const int xs[2] = {x.x_a, x.x_b};
    const double ts[2] = {theta_a, theta_b};
    for (int k = 0; k < 2; ++k) {
      ll += std::lgamma(ns[k] + 1.0) - std::lgamma(xs[k] + 1.0) -
            std::lgamma(ns[k] - xs[k] + 1.0);
      if (xs[k] > 0) ll += xs[k] * std::log(ts[k]);
      if (ns[k] - xs[k] > 0) ll += (ns[k] - xs[k]) * std::log1p(-ts[k]);
    }
    logits[i] = (1.0 - a) * std::log(pmf[i]) + a * ll;
  }
  const double norm = log_sum_exp(logits);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double cum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cum += std::exp(logits[i] - norm);
    if (u <= cum) return grid[i];
  }
  return grid.back();
}

bool gaussian_hdr_contains(const GaussianDist& post,
                           const Eigen::VectorXd& theta, double level) {
  const Eigen::LLT<Eigen::MatrixXd> llt(post.cov);
  const Eigen::VectorXd d = theta - post.mean;
  const double maha = d.dot(llt.solve(d));
  const double q = boost::math::quantile(
      boost::math::chi_squared(static_cast<double>(post.dim())), level);
  return maha <= q;
}

bool beta_equal_tail_contains(const BetaDist& post, double theta,
                              double per_coord_level) {
  const boost::math::beta_distribution<double> dist(post.delta, post.gamma);
  const double lo = boost::math::quantile(dist, (1.0 - per_coord_level) / 2.0);
  const double hi = boost::math::quantile(dist, (1.0 + per_coord_level) / 2.0);
  return theta >= lo && theta <= hi;
}

double closed_form_value(const LinRegModel& model,
                         const ExperimentConfig& config, double scalar_design,
                         const Order& order) {
  return sibson_mi(model, batch_for(config, model, scalar_design), order);
}

/// Max of the convex quadratic xi^T Sigma_0 xi over the box; attained at a
/// vertex, enumerated exactly for moderate dimension.
double box_optimum_identity(const LinRegModel& model, const Order& order) {
  const Eigen::Index d = model.design_dim();
  if (d > 20) {
    throw std::runtime_error("box_optimum_identity: dimension too large");
  }
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (1ULL << d); ++mask) {
    Eigen::VectorXd corner(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      corner[i] = (mask >> i) & 1 ? model.box_hi[i] : model.box_lo[i];
    }
    DesignBatch batch;
    batch.map = FeatureMap::identity;
    batch.designs.push_back(corner);
    best = std::max(best, sibson_mi(model, batch, order));
  }
  return best;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig c;
  auto get = [&](const char* key, auto fallback) {
    using T = decltype(fallback);
    return j.contains(key) ? j.at(key).get<T>() : fallback;
  };
  c.model = get("model", c.model);
  c.alpha = get("alpha", c.alpha);
  c.data_alpha = get("data_alpha", c.data_alpha);
  c.trials = get("trials", c.trials);
  c.outer_n = get("outer_n", c.outer_n);
  c.inner_m = get("inner_m", c.inner_m);
  c.lambda = get("lambda", c.lambda);
  c.delta = get("delta", c.delta);
  c.seed = get("seed", c.seed);
  c.output = get("output", c.output);
  c.threads = get("threads", c.threads);
  c.dim = get("dim", c.dim);
  c.feature_map = get("feature_map", c.feature_map);
  c.noise_var = get("noise_var", c.noise_var);
  c.prior_scale = get("prior_scale", c.prior_scale);
  c.batch = get("batch", c.batch);
  c.design_grid = get("design_grid", c.design_grid);
  c.nx = get("nx", c.nx);
  c.prior_delta_a = get("prior_delta_a", c.prior_delta_a);
  c.prior_gamma_a = get("prior_gamma_a", c.prior_gamma_a);
  c.prior_delta_b = get("prior_delta_b", c.prior_delta_b);
  c.prior_gamma_b = get("prior_gamma_b", c.prior_gamma_b);
  c.levels = read_list(j, "levels", c.levels);
  c.alphas = read_list(j, "alphas", c.alphas);
  c.test_points = get("test_points", c.test_points);
  c.reps = get("reps", c.reps);
  c.naive_iters = get("naive_iters", c.naive_iters);
  c.naive_step = get("naive_step", c.naive_step);
  c.fd_step = get("fd_step", c.fd_step);
  c.md_steps = get("md_steps", c.md_steps);
  c.md_batch = get("md_batch", c.md_batch);
  c.md_mean_step = get("md_mean_step", c.md_mean_step);
  c.md_log_std_step = get("md_log_std_step", c.md_log_std_step);
  c.md_final_scale = get("md_final_scale", c.md_final_scale);
  c.md_prior_std = get("md_prior_std", c.md_prior_std);
  c.policy_samples = get("policy_samples", c.policy_samples);
  return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << file.rdbuf();
  return from_json_string(ss.str());
}

std::string ExperimentConfig::to_json_string() const {
  json j;
  j["model"] = model;
  j["alpha"] = alpha;
  j["data_alpha"] = data_alpha;
  j["trials"] = trials;
  j["outer_n"] = outer_n;
  j["inner_m"] = inner_m;
  j["lambda"] = lambda;
  j["delta"] = delta;
  j["seed"] = seed;
  j["output"] = output;
  j["threads"] = threads;
  j["dim"] = dim;
  j["feature_map"] = feature_map;
  j["noise_var"] = noise_var;
  j["prior_scale"] = prior_scale;
  j["batch"] = batch;
  j["design_grid"] = design_grid;
  j["nx"] = nx;
  j["prior_delta_a"] = prior_delta_a;
  j["prior_gamma_a"] = prior_gamma_a;
  j["prior_delta_b"] = prior_delta_b;
  j["prior_gamma_b"] = prior_gamma_b;
  j["levels"] = join_double_list(levels);
  j["alphas"] = join_double_list(alphas);
  j["test_points"] = test_points;
  j["reps"] = reps;
  j["naive_iters"] = naive_iters;
  j["naive_step"] = naive_step;
  j["fd_step"] = fd_step;
  j["md_steps"] = md_steps;
  j["md_batch"] = md_batch;
  j["md_mean_step"] = md_mean_step;
  j["md_log_std_step"] = md_log_std_step;
  j["md_final_scale"] = md_final_scale;
  j["md_prior_std"] = md_prior_std;
  j["policy_samples"] = policy_samples;
  return j.dump(2);
}

FeatureMap feature_map_from_config(const ExperimentConfig& config) {
  if (config.feature_map == "affine") return FeatureMap::affine;
  if (config.feature_map == "identity") return FeatureMap::identity;
  throw std::invalid_argument("unknown feature map: " + config.feature_map);
}

LinRegModel linreg_from_config(const ExperimentConfig& config) {
  const int d = config.dim;
  const int design_dim =
      feature_map_from_config(config) == FeatureMap::affine ? d - 1 : d;
  if (design_dim < 1) {
    throw std::invalid_argument("linreg_from_config: dim too small for map");
  }
  return LinRegModel::with_default_box(
      Eigen::VectorXd::Zero(d),
      config.prior_scale * Eigen::MatrixXd::Identity(d, d), config.noise_var,
      design_dim);
}

ABModel abtest_from_config(const ExperimentConfig& config) {
  return ABModel(BetaDist(config.prior_delta_a, config.prior_gamma_a),
                 BetaDist(config.prior_delta_b, config.prior_gamma_b),
                 config.nx);
}

double optimal_scalar_design(const LinRegModel& model, int batch_size,
                             int grid, const Order& order) {
  if (grid < 2) throw std::invalid_argument("optimal_scalar_design: grid < 2");
  const double lo = model.box_lo[0], hi = model.box_hi[0];
  double best_xi = lo;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double xi = lo + (hi - lo) * i / (grid - 1);
    const double v =
        sibson_mi(model, repeated_scalar_batch(xi, batch_size), order);
    if (v > best_val) {
      best_val = v;
      best_xi = xi;
    }
  }
  return best_xi;
}

int optimal_allocation(const ABModel& model, const Order& order) {
  int best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int na = 0; na <= model.total_budget; ++na) {
    const double v = sibson_mi(model, allocation(model, na), order);
    if (v > best_val) {
      best_val = v;
      best = na;
    }
  }
  return best;
}

Table run_infogain(const ExperimentConfig& config) {
  const Order belief(config.alpha);
  const Order data(config.effective_data_alpha());
  const Seed seed{config.seed};

  Table table;
  table.columns = {"trial",         "design_nominal", "design_robust",
                   "gain_nominal",  "gain_robust",    "sibson_benchmark"};
  table.rows.resize(config.trials);

  if (config.model == "linreg") {
    const LinRegModel model = linreg_from_config(config);
    const double xi_nom =
        optimal_scalar_design(model, config.batch, config.design_grid, Order(1.0));
    const double xi_rob =
        optimal_scalar_design(model, config.batch, config.design_grid, belief);
    const DesignBatch batch_nom = batch_for(config, model, xi_nom);
    const DesignBatch batch_rob = batch_for(config, model, xi_rob);
    const double benchmark = sibson_mi(model, batch_rob, belief);

    parallel_for(config.trials, config.threads, [&](int t) {
      const Seed st = seed.derive(static_cast<std::uint64_t>(t));
      const auto nom = sample_worst_case(model, batch_nom, data, 1, st.derive(0));
      const auto rob = sample_worst_case(model, batch_rob, data, 1, st.derive(1));
      const double g_nom =
          conditional_gain(model, batch_nom, nom[0].outcomes, Order(1.0));
      const double g_rob =
          conditional_gain(model, batch_rob, rob[0].outcomes, belief);
      table.rows[t] = {std::int64_t(t), xi_nom, xi_rob, g_nom, g_rob, benchmark};
    });
  } else if (config.model == "abtest") {
    const ABModel model = abtest_from_config(config);
    const int na_nom = optimal_allocation(model, Order(1.0));
    const int na_rob = optimal_allocation(model, belief);
    const Allocation alloc_nom = allocation(model, na_nom);
    const Allocation alloc_rob = allocation(model, na_rob);
    const double benchmark = sibson_mi(model, alloc_rob, belief);

    parallel_for(config.trials, config.threads, [&](int t) {
      const Seed st = seed.derive(static_cast<std::uint64_t>(t));
      const auto nom = sample_worst_case(model, alloc_nom, data, 1, st.derive(0));
      const auto rob = sample_worst_case(model, alloc_rob, data, 1, st.derive(1));
      const double g_nom =
          conditional_gain(model, alloc_nom, nom[0].outcome, Order(1.0));
      const double g_rob =
          conditional_gain(model, alloc_rob, rob[0].outcome, belief);
      table.rows[t] = {std::int64_t(t), double(na_nom), double(na_rob),
                       g_nom,           g_rob,          benchmark};
    });
  } else {
    throw std::invalid_argument("run_infogain: unknown model " + config.model);
  }
  return table;
}

Table run_coverage(const ExperimentConfig& config,
                   const std::vector<double>& levels) {
  for (double c : levels) {
    if (!(c > 0.0 && c < 1.0)) {
      throw std::invalid_argument("run_coverage: levels must lie in (0, 1)");
    }
  }
  const Order belief(config.alpha);
  const Order data(config.effective_data_alpha());
  const Seed seed{config.seed};

  Table table;
  table.columns = {"trial"};
  for (const char* kind : {"nominal", "tilted"}) {
    for (double c : levels) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "cover_%s_%g", kind, c);
      table.columns.push_back(buf);
    }
  }
  table.rows.resize(config.trials);

  if (config.model == "linreg") {
    const LinRegModel model = linreg_from_config(config);
    const double xi =
        optimal_scalar_design(model, config.batch, config.design_grid, belief);
    const DesignBatch batch = batch_for(config, model, xi);

    parallel_for(config.trials, config.threads, [&](int t) {
      const Seed st = seed.derive(static_cast<std::uint64_t>(t));
      const auto draw = sample_worst_case(model, batch, data, 1, st);
      const GaussianDist nominal = posterior(model, batch, draw[0].outcomes);
      const GaussianDist tilted =
          tilted_posterior(model, batch, draw[0].outcomes, belief);
      std::vector<Table::Cell> row = {std::int64_t(t)};
      for (const GaussianDist* post : {&nominal, &tilted}) {
        for (double c : levels) {
          row.push_back(std::int64_t(
              gaussian_hdr_contains(*post, draw[0].theta, c) ? 1 : 0));
        }
      }
      table.rows[t] = std::move(row);
    });
  } else if (config.model == "abtest") {
    const ABModel model = abtest_from_config(config);
    const Allocation alloc = allocation(model, optimal_allocation(model, belief));

    parallel_for(config.trials, config.threads, [&](int t) {
      const Seed st = seed.derive(static_cast<std::uint64_t>(t));
      const auto draw = sample_worst_case(model, alloc, data, 1, st);
      const auto nominal = posterior(model, alloc, draw[0].outcome);
      const auto tilted = tilted_posterior(model, alloc, draw[0].outcome, belief);
      std::vector<Table::Cell> row = {std::int64_t(t)};
      for (const auto* post : {&nominal, &tilted}) {
        for (double c : levels) {
          const double per_coord = std::sqrt(c);
          const bool in =
              beta_equal_tail_contains(post->first, draw[0].theta_a, per_coord) &&
              beta_equal_tail_contains(post->second, draw[0].theta_b, per_coord);
          row.push_back(std::int64_t(in ? 1 : 0));
        }
      }
      table.rows[t] = std::move(row);
    });
  } else {
    throw std::invalid_argument("run_coverage: unknown model " + config.model);
  }
  return table;
}

std::vector<CoverageSummary> summarize_coverage(
    const Table& table, const std::vector<double>& levels) {
  std::vector<CoverageSummary> out;
  const std::size_t kinds = 2;
  for (std::size_t k = 0; k < kinds; ++k) {
    for (std::size_t l = 0; l < levels.size(); ++l) {
      const std::size_t col = 1 + k * levels.size() + l;
      double total = 0.0;
      for (const auto& row : table.rows) {
        total += static_cast<double>(std::get<std::int64_t>(row[col]));
      }
      out.push_back(CoverageSummary{k == 0 ? "nominal" : "tilted", levels[l],
                                    table.rows.empty()
                                        ? 0.0
                                        : total / double(table.rows.size())});
    }
  }
  return out;
}

Table run_elpd(const ExperimentConfig& config,
               const std::vector<double>& alphas) {
  const Seed seed{config.seed};
  Table table;
  table.columns = {"alpha", "rule", "trial", "design", "elpd"};
  const int rows_per_case = config.trials;
  table.rows.resize(alphas.size() * 2 * rows_per_case);

  const auto row_index = [&](std::size_t ai, int rule, int t) {
    return (ai * 2 + rule) * rows_per_case + t;
  };
  // One trial seed shared by both design rules: comparisons are paired, and
  // with no training data the two rules coincide exactly.
  const auto trial_seed = [&](std::size_t ai, int t) {
    return seed.derive(ai * rows_per_case + t);
  };

  if (config.model == "linreg") {
    const LinRegModel model = linreg_from_config(config);
    // Held-out designs spread across the box so the score probes every
    // parameter direction, not a single linear functional.
    std::vector<double> spread(config.test_points);
    for (int i = 0; i < config.test_points; ++i) {
      spread[i] = config.test_points == 1
                      ? 0.0
                      : model.box_lo[0] + (model.box_hi[0] - model.box_lo[0]) *
                                              i / (config.test_points - 1);
    }
    const DesignBatch test_batch = scalar_batch(spread);

    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
      const Order order(alphas[ai]);
      // Optimal rule: best endpoint mix of the batch (the D-optimal
      // support for a boxed scalar design is the two endpoints).
      DesignBatch optimal_batch;
      double best_value = -std::numeric_limits<double>::infinity();
      for (int k = 0; k <= config.batch; ++k) {
        std::vector<double> xs(config.batch, model.box_lo[0]);
        for (int i = 0; i < k; ++i) xs[i] = model.box_hi[0];
        const DesignBatch candidate = scalar_batch(xs);
        const double v = sibson_mi(model, candidate, order);
        if (v > best_value) {
          best_value = v;
          optimal_batch = candidate;
        }
      }
      for (int rule = 0; rule < 2; ++rule) {
        parallel_for(config.trials, config.threads, [&, ai, rule](int t) {
          const Seed st = trial_seed(ai, t);
          DesignBatch train = optimal_batch;
          double xi = 0.0;
          if (rule == 0) {  // random rule: one uniform design, repeated
            Rng rng = st.derive(0).engine();
            std::uniform_real_distribution<double> unif(model.box_lo[0],
                                                        model.box_hi[0]);
            xi = unif(rng);
            train = batch_for(config, model, xi);
          } else {
            for (const auto& d : train.designs) xi += d[0];
            xi = train.designs.empty() ? 0.0 : xi / double(train.designs.size());
          }
          const auto draw = sample_worst_case(model, train, order, 1, st.derive(1));
          const GaussianDist tilted =
              tilted_posterior(model, train, draw[0].outcomes, order);
          const GaussianDist test_law = worst_case_outcome_given_theta(
              model, test_batch, order, draw[0].theta);
          Rng rng = st.derive(2).engine();
          const Eigen::VectorXd x_test = draw_gaussian(test_law, rng);
          const double elpd =
              log_predictive_density(model, tilted, test_batch, x_test);
          table.rows[row_index(ai, rule, t)] = {
              alphas[ai], std::string(rule == 0 ? "random" : "optimal"),
              std::int64_t(t), xi, elpd};
        });
      }
    }
  } else if (config.model == "abtest") {
    const ABModel model = abtest_from_config(config);
    const int test_na = config.test_points / 2;
    const Allocation test_alloc{test_na, config.test_points - test_na};

    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
      const Order order(alphas[ai]);
      const int na_opt = optimal_allocation(model, order);
      for (int rule = 0; rule < 2; ++rule) {
        parallel_for(config.trials, config.threads, [&, ai, rule](int t) {
          const Seed st = trial_seed(ai, t);
          int na = na_opt;
          if (rule == 0) {
            Rng rng = st.derive(0).engine();
            std::uniform_int_distribution<int> unif(0, model.total_budget);
            na = unif(rng);
          }
          const Allocation train = allocation(model, na);
          const auto draw = sample_worst_case(model, train, order, 1, st.derive(1));
          const auto tilted = tilted_posterior(model, train, draw[0].outcome, order);
          Rng rng = st.derive(2).engine();
          const ABOutcome x_test = draw_worst_case_outcome_given_theta(
              model, test_alloc, order, draw[0].theta_a, draw[0].theta_b, rng);
          const double elpd =
              log_predictive_pmf(model, tilted, test_alloc, x_test);
          table.rows[row_index(ai, rule, t)] = {
              alphas[ai], std::string(rule == 0 ? "random" : "optimal"),
              std::int64_t(t), double(na), elpd};
        });
      }
    }
  } else {
    throw std::invalid_argument("run_elpd: unknown model " + config.model);
  }
  return table;
}

Table run_regret(const ExperimentConfig& config) {
  const Order order(config.alpha);
  const Seed seed{config.seed};
  const NmcConfig nmc_config(config.outer_n, config.inner_m, order);

  Table table;
  table.columns = {"rep",          "naive_regret", "naive_ratio",
                   "pac_regret",   "pac_ratio"};
  table.rows.resize(config.reps);

  if (config.model == "linreg") {
    const FeatureMap map = feature_map_from_config(config);
    const LinRegModel model = linreg_from_config(config);
    const LinRegGenerative gen(model, map);
    const Eigen::Index d = model.design_dim();

    const double optimum =
        map == FeatureMap::identity
            ? box_optimum_identity(model, order)
            : closed_form_value(
                  model, config,
                  optimal_scalar_design(model, config.batch, config.design_grid,
                                        order),
                  order);
    const auto value_of = [&](const Eigen::VectorXd& xi) {
      return sibson_mi(model, gen.to_batch(xi), order);
    };

    parallel_for(config.reps, config.threads, [&](int r) {
      const Seed sr = seed.derive(static_cast<std::uint64_t>(r));

      // Naive path: projected ascent on fresh-sample estimates through
      // central finite differences.
      Eigen::VectorXd xi(d);
      {
        Rng rng = sr.derive(0).engine();
        for (Eigen::Index i = 0; i < d; ++i) {
          std::uniform_real_distribution<double> unif(model.box_lo[i],
                                                      model.box_hi[i]);
          xi[i] = unif(rng);
        }
      }
      std::uint64_t counter = 0;
      const Seed eval_seed = sr.derive(1);
      const auto noisy = [&](const Eigen::VectorXd& x) {
        return estimate(gen, x.cwiseMax(model.box_lo).cwiseMin(model.box_hi),
                        nmc_config, eval_seed.derive(counter++));
      };
      const double h = config.fd_step;
      for (int it = 0; it < config.naive_iters; ++it) {
        Eigen::VectorXd grad(d);
        for (Eigen::Index i = 0; i < d; ++i) {
          Eigen::VectorXd up = xi, down = xi;
          up[i] += h;
          down[i] -= h;
          grad[i] = (noisy(up) - noisy(down)) / (2.0 * h);
        }
        xi = (xi + config.naive_step * grad)
                 .cwiseMax(model.box_lo)
                 .cwiseMin(model.box_hi);
      }
      const double naive_value = value_of(xi);

      // PAC path: mirror descent over a boxed Gaussian policy.
      const BoxedGaussianPolicy prior(
          (model.box_lo + model.box_hi) / 2.0,
          Eigen::VectorXd::Constant(d, std::log(config.md_prior_std)),
          model.box_lo, model.box_hi);
      const PacConfig pac(config.lambda, config.delta);
      MirrorDescentOptions options;
      options.steps = config.md_steps;
      options.batch = config.md_batch;
      options.mean_step = config.md_mean_step;
      options.log_std_step = config.md_log_std_step;
      options.final_step_scale = config.md_final_scale;
      const auto oracle = [&](const Eigen::VectorXd& x, Seed s) {
        return estimate(gen, x, nmc_config, s);
      };
      const BoxedGaussianPolicy final_policy =
          mirror_descent(oracle, prior, pac, options, sr.derive(2));

      Rng rng = sr.derive(3).engine();
      double pac_value = 0.0;
      for (int s = 0; s < config.policy_samples; ++s) {
        pac_value += value_of(final_policy.clip(final_policy.sample(rng)));
      }
      pac_value /= config.policy_samples;

      table.rows[r] = {std::int64_t(r), optimum - naive_value,
                       naive_value / optimum, optimum - pac_value,
                       pac_value / optimum};
    });
  } else if (config.model == "abtest") {
    const ABModel model = abtest_from_config(config);
    const ABTestGenerative gen(model);

    std::vector<Eigen::VectorXd> designs;
    std::vector<double> truth;
    double optimum = -std::numeric_limits<double>::infinity();
    for (int na = 0; na <= model.total_budget; ++na) {
      designs.push_back(Eigen::VectorXd::Constant(1, double(na)));
      truth.push_back(sibson_mi(model, allocation(model, na), order));
      optimum = std::max(optimum, truth.back());
    }

    parallel_for(config.reps, config.threads, [&](int r) {
      const Seed sr = seed.derive(static_cast<std::uint64_t>(r));

      // Naive path: single-shot noisy argmax over allocations.
      int best_na = 0;
      double best_est = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < designs.size(); ++k) {
        const double e = estimate(gen, designs[k], nmc_config, sr.derive(1).derive(k));
        if (e > best_est) {
          best_est = e;
          best_na = static_cast<int>(k);
        }
      }
      const double naive_value = truth[best_na];

      // PAC path: Gibbs policy over the allocation grid.
      const std::vector<double> estimates =
          estimate_per_design(gen, designs, nmc_config, sr.derive(2));
      const DiscretePolicy prior = DiscretePolicy::uniform(designs);
      const DiscretePolicy gibbs = gibbs_update(
          prior,
          Eigen::Map<const Eigen::VectorXd>(estimates.data(),
                                            Eigen::Index(estimates.size())),
          config.lambda);
      double pac_value = 0.0;
      for (std::size_t k = 0; k < truth.size(); ++k) {
        pac_value += std::exp(gibbs.log_probs[Eigen::Index(k)]) * truth[k];
      }

      table.rows[r] = {std::int64_t(r), optimum - naive_value,
                       naive_value / optimum, optimum - pac_value,
                       pac_value / optimum};
    });
  } else {
    throw std::invalid_argument("run_regret: unknown model " + config.model);
  }
  return table;
}

}  // namespace robed
