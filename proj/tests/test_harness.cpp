// Copyright 2026 The robed authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "robed/harness.hpp"
#include "robed/nmc.hpp"
#include "robed/shannon.hpp"

using namespace robed;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(bool(f));
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/robed_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("config json round trip and defaults") {
  ExperimentConfig config;
  config.model = "abtest";
  config.alpha = 0.25;
  config.seed = 99;
  config.levels = {0.4, 0.9};
  config.alphas = {0.05, 0.2};
  const ExperimentConfig parsed =
      ExperimentConfig::from_json_string(config.to_json_string());
  CHECK(parsed.model == "abtest");
  CHECK(parsed.alpha == 0.25);
  CHECK(parsed.seed == 99);
  CHECK(parsed.levels == std::vector<double>{0.4, 0.9});
  CHECK(parsed.alphas == std::vector<double>{0.05, 0.2});

  const ExperimentConfig partial =
      ExperimentConfig::from_json_string(R"({"model": "linreg", "trials": 7})");
  CHECK(partial.trials == 7);
  CHECK(partial.alpha == 0.5);  // untouched default

  CHECK(ExperimentConfig().effective_data_alpha() == 0.5);
  ExperimentConfig tilted;
  tilted.alpha = 0.3;
  tilted.data_alpha = 0.65;
  CHECK(tilted.effective_data_alpha() == 0.65);
}

TEST_CASE("write_csv") {
  Table table;
  table.columns = {"a", "b", "c"};

  TempFile out("empty.csv");
  write_csv(table, out.path);
  CHECK(slurp(out.path) == "a,b,c\n");

  table.add_row({std::int64_t(1), 0.1, std::string("x")});
  table.add_row({std::int64_t(2), 1.0 / 3.0, std::string("y")});
  write_csv(table, out.path);
  const std::string first = slurp(out.path);

  // round trip: 17 significant digits recover the double exactly
  std::stringstream ss(first);
  std::string line;
  std::getline(ss, line);  // header
  std::getline(ss, line);
  std::getline(ss, line);
  const auto comma1 = line.find(',');
  const auto comma2 = line.find(',', comma1 + 1);
  CHECK(std::stod(line.substr(comma1 + 1, comma2 - comma1 - 1)) == 1.0 / 3.0);

  // identical input gives identical bytes
  write_csv(table, out.path);
  CHECK(slurp(out.path) == first);

  CHECK_THROWS_AS(table.add_row({std::int64_t(1)}), std::invalid_argument);
  CHECK_THROWS_AS(write_csv(table, "/nonexistent_dir/x.csv"),
                  std::runtime_error);
}

TEST_CASE("optimal designs") {
  ExperimentConfig config;
  const LinRegModel model = linreg_from_config(config);
  // symmetric objective over [-1, 1]: the scan picks the smaller endpoint
  CHECK(optimal_scalar_design(model, 1, 201, Order(1.0)) ==
        doctest::Approx(-1.0));

  const ABModel ab = abtest_from_config(config);
  const int na = optimal_allocation(ab, Order(1.0));
  // uniform priors: balanced-ish optimum by symmetry; ties break low
  CHECK(na >= 0);
  CHECK(na <= config.nx);
  CHECK(sibson_mi(ab, allocation(ab, na), Order(1.0)) >=
        sibson_mi(ab, allocation(ab, config.nx / 2), Order(1.0)) - 1e-12);
}

TEST_CASE("run_infogain emits the benchmark and plausible gains") {
  ExperimentConfig config;
  config.model = "abtest";
  config.alpha = 0.3;
  config.nx = 10;
  config.trials = 200;
  config.seed = 5;

  const Table table = run_infogain(config);
  REQUIRE(table.rows.size() == 200);
  const double benchmark = std::get<double>(table.rows[0][5]);
  const ABModel model = abtest_from_config(config);
  const int na_rob = int(std::get<double>(table.rows[0][2]));
  CHECK(benchmark ==
        doctest::Approx(sibson_mi(model, allocation(model, na_rob), Order(0.3))));
  for (const auto& row : table.rows) {
    CHECK(std::get<double>(row[3]) >= -1e-12);  // nominal KL gain
    CHECK(std::get<double>(row[4]) >= -1e-12);  // robust Renyi gain
  }
}

TEST_CASE("run_infogain mean robust gain approximates the exact aggregation") {
  // At the data order equal to the belief order, the average conditional
  // gain under the worst-case draw law is computable exactly for abtest.
  ExperimentConfig config;
  config.model = "abtest";
  config.alpha = 0.5;
  config.nx = 8;
  config.trials = 4000;
  config.seed = 6;

  const Table table = run_infogain(config);
  double mean = 0.0, m2 = 0.0;
  for (const auto& row : table.rows) {
    const double g = std::get<double>(row[4]);
    mean += g;
    m2 += g * g;
  }
  mean /= double(table.rows.size());
  const double se = std::sqrt((m2 / double(table.rows.size()) - mean * mean) /
                              double(table.rows.size()));

  const ABModel model = abtest_from_config(config);
  const int na_rob = int(std::get<double>(table.rows[0][2]));
  const Allocation alloc = allocation(model, na_rob);
  const auto pmf = tilted_marginal_pmf(model, alloc, Order(0.5));
  double expected = 0.0;
  const auto grid = outcome_grid(alloc);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    expected += pmf[i] * conditional_gain(model, alloc, grid[i], Order(0.5));
  }
  CHECK(std::abs(mean - expected) < 4.0 * se);
}

TEST_CASE("robust-optimal allocation shifts away from the nominal one at small alpha") {
  ExperimentConfig config;
  config.model = "abtest";
  config.alpha = 0.1;
  config.nx = 25;
  config.prior_delta_b = 3.0;  // asymmetric priors expose the shift
  config.trials = 10;
  config.seed = 9;
  const Table table = run_infogain(config);
  const double na_nominal = std::get<double>(table.rows[0][1]);
  const double na_robust = std::get<double>(table.rows[0][2]);
  CHECK(na_nominal != na_robust);
}

TEST_CASE("run_infogain at alpha = 1 uses one design and the KL gain twice") {
  ExperimentConfig config;
  config.model = "linreg";
  config.alpha = 1.0;
  config.trials = 50;
  config.seed = 7;
  const Table table = run_infogain(config);
  CHECK(std::get<double>(table.rows[0][1]) == std::get<double>(table.rows[0][2]));
}

TEST_CASE("coverage indicators are 0/1 and average to the summary exactly") {
  ExperimentConfig config;
  config.model = "abtest";
  config.alpha = 0.4;
  config.nx = 10;
  config.trials = 300;
  config.seed = 11;
  const std::vector<double> levels{0.5, 0.8};
  const Table table = run_coverage(config, levels);

  double manual = 0.0;
  for (const auto& row : table.rows) {
    const auto v = std::get<std::int64_t>(row[1]);
    CHECK((v == 0 || v == 1));
    manual += double(v);
  }
  manual /= double(table.rows.size());
  const auto summary = summarize_coverage(table, levels);
  REQUIRE(summary.size() == 4);
  CHECK(summary[0].kind == "nominal");
  CHECK(summary[0].level == 0.5);
  CHECK(summary[0].coverage == doctest::Approx(manual).epsilon(1e-15));
}

TEST_CASE("well-specified control sits on the diagonal") {
  ExperimentConfig config;
  config.alpha = 1.0;  // nominal data, nominal posterior
  config.trials = 2000;
  config.seed = 13;
  const std::vector<double> levels{0.5, 0.8};

  for (const char* model : {"linreg", "abtest"}) {
    config.model = model;
    const Table table = run_coverage(config, levels);
    for (const auto& s : summarize_coverage(table, levels)) {
      CHECK(std::abs(s.coverage - s.level) < 0.04);
    }
  }
}

TEST_CASE("coverage direction under data tilted beyond the belief") {
  ExperimentConfig config;
  config.alpha = 0.3;       // belief tilt
  config.data_alpha = 0.65; // data tilted relative to nominal, less than belief
  config.trials = 1500;
  config.seed = 17;
  const std::vector<double> levels{0.5, 0.8};

  for (const char* model : {"linreg", "abtest"}) {
    config.model = model;
    const Table table = run_coverage(config, levels);
    const auto summary = summarize_coverage(table, levels);
    for (const auto& s : summary) {
      if (s.kind == "nominal") CHECK(s.coverage < s.level);
      if (s.kind == "tilted") CHECK(s.coverage > s.level);
    }
  }
}

TEST_CASE("elpd with zero training data: optimal equals random exactly") {
  ExperimentConfig config;
  config.model = "linreg";
  config.batch = 0;  // no training measurements
  config.trials = 40;
  config.test_points = 5;
  config.seed = 19;
  const Table table = run_elpd(config, {0.3});
  REQUIRE(table.rows.size() == 80);
  for (int t = 0; t < 40; ++t) {
    const double random_elpd = std::get<double>(table.rows[t][4]);
    const double optimal_elpd = std::get<double>(table.rows[40 + t][4]);
    CHECK(random_elpd == optimal_elpd);
  }
}

TEST_CASE("elpd is finite and reproducible") {
  ExperimentConfig config;
  config.model = "abtest";
  config.nx = 10;
  config.trials = 60;
  config.seed = 23;
  const Table a = run_elpd(config, {0.1, 0.5});
  const Table b = run_elpd(config, {0.1, 0.5});
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const double va = std::get<double>(a.rows[i][4]);
    CHECK(std::isfinite(va));
    CHECK(va == std::get<double>(b.rows[i][4]));
  }
}

TEST_CASE("regret rows stay consistent") {
  ExperimentConfig config;
  config.model = "abtest";
  config.nx = 8;
  config.reps = 12;
  config.outer_n = 24;
  config.inner_m = 16;
  config.lambda = 30.0;
  config.seed = 29;
  const Table table = run_regret(config);
  REQUIRE(table.rows.size() == 12);
  for (const auto& row : table.rows) {
    for (int c : {1, 3}) CHECK(std::get<double>(row[c]) >= -1e-9);
    for (int c : {2, 4}) {
      CHECK(std::get<double>(row[c]) <= 1.0 + 1e-9);
      CHECK(std::get<double>(row[c]) >= -1e-9);
    }
  }
}

TEST_CASE("experiments are deterministic under parallel execution") {
  ExperimentConfig config;
  config.model = "linreg";
  config.alpha = 0.4;
  config.trials = 64;
  config.seed = 31;

  config.threads = 1;
  const std::string seq = to_csv_string(run_infogain(config));
  config.threads = 2;
  CHECK(to_csv_string(run_infogain(config)) == seq);

  const std::string cov_seq = to_csv_string(run_coverage(config, {0.5, 0.8}));
  config.threads = 1;
  CHECK(to_csv_string(run_coverage(config, {0.5, 0.8})) == cov_seq);
}
