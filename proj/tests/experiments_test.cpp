// Copyright 2026 The chainhash Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chainhash/experiments.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

namespace chainhash {
namespace {

ExperimentConfig CollisionConfig(const std::string& dist, std::uint64_t trials) {
  ExperimentConfig cfg;
  cfg.experiment = "collision";
  cfg.keys.name = dist;
  cfg.n = 64;
  cfg.load = 100.0;
  cfg.trials = trials;
  cfg.base_seed = 11;
  cfg.bound.kind = "load_factor";
  cfg.bound.epsilon = 0.15;
  return cfg;
}

ExperimentConfig AstConfig(std::uint64_t trials) {
  ExperimentConfig cfg;
  cfg.experiment = "ast";
  cfg.n = 100;
  cfg.load = 100.0;
  cfg.access.name = "restricted";
  cfg.access.alpha = 0.1;
  cfg.trials = trials;
  cfg.base_seed = 5;
  cfg.bound.kind = "ast_eps";
  cfg.bound.epsilon = 0.15;
  return cfg;
}

TEST(RunCollisionTrials, PointMassIsExact) {
  const auto report = run_collision_trials(CollisionConfig("pointmass", 50));
  EXPECT_EQ(report.m, 6400u);
  EXPECT_DOUBLE_EQ(report.p_norm_sq, 1.0);
  EXPECT_EQ(report.aggregates.violations, 0u);
  for (const auto& rec : report.records) {
    EXPECT_DOUBLE_EQ(rec.value, 1.0);
    EXPECT_DOUBLE_EQ(rec.rel_error, 0.0);
  }
}

TEST(RunCollisionTrials, SingleTrial) {
  const auto report = run_collision_trials(CollisionConfig("uniform", 1));
  ASSERT_EQ(report.records.size(), 1u);
  EXPECT_EQ(report.aggregates.trials, 1u);
  EXPECT_EQ(report.aggregates.std_value, 0.0);
}

TEST(RunCollisionTrials, CoverageWithinBound) {
  const double tail = (10.0 / 9.0) * std::exp(-2.25);
  for (std::uint64_t seed : {11u, 12345u}) {
    auto cfg = CollisionConfig("uniform", 2000);
    cfg.base_seed = seed;
    const auto report = run_collision_trials(cfg);
    EXPECT_NEAR(report.bound.threshold, 3.3, 1e-12);
    EXPECT_NEAR(report.bound.tail, tail, 1e-15);
    const double se = std::sqrt(tail * (1 - tail) / 2000.0);
    EXPECT_LE(report.aggregates.violation_frequency, tail + 3 * se);
    EXPECT_NEAR(report.aggregates.mean_value, 1.0 / 64.0, 1e-3);
  }
}

TEST(RunCollisionTrials, ReportIsSelfConsistent) {
  auto cfg = CollisionConfig("zipf", 500);
  cfg.bound.kind = "main";
  cfg.bound.s = 0.5;  // small s gives a tight threshold, so some trials violate
  const auto report = run_collision_trials(cfg);
  std::uint64_t violations = 0;
  double sum = 0.0;
  for (const auto& rec : report.records) {
    EXPECT_EQ(rec.violation, rec.rel_error > report.bound.threshold);
    EXPECT_DOUBLE_EQ(rec.rel_error, std::abs(rec.value / report.p_norm_sq - 1.0));
    violations += rec.violation;
    sum += rec.value;
  }
  EXPECT_EQ(violations, report.aggregates.violations);
  EXPECT_EQ(report.aggregates.violation_frequency,
            static_cast<double>(violations) / static_cast<double>(report.records.size()));
  EXPECT_NEAR(report.aggregates.mean_value, sum / 500.0, 1e-15);
}

TEST(RunCollisionTrials, DeterministicAndReplayable) {
  auto cfg = CollisionConfig("zipf", 300);
  cfg.threads = 3;
  const auto a = run_collision_trials(cfg);
  cfg.threads = 1;
  const auto b = run_collision_trials(cfg);
  EXPECT_EQ(report_json(a)["aggregates"].dump(), report_json(b)["aggregates"].dump());
  EXPECT_EQ(a.records, b.records);

  const Experiment exp(cfg);
  for (std::uint64_t t : {0u, 17u, 299u}) EXPECT_EQ(exp.trial(t), a.records[t]);

  std::ostringstream csv_a, csv_b;
  write_report_csv(a, csv_a);
  write_report_csv(b, csv_b);
  EXPECT_EQ(csv_a.str(), csv_b.str());
  EXPECT_EQ(csv_a.str().substr(0, 32), "trial,value,rel_error,violation\n");
}

TEST(RunCollisionTrials, ReservoirBeyondStorageCap) {
  ExperimentConfig cfg;
  cfg.n = 2;
  cfg.m = 2;
  cfg.trials = kMaxStoredRecords + 5000;
  cfg.bound.kind = "gr";
  cfg.bound.beta = 0.5;
  cfg.bound.lambda = 0.0;
  const auto report = run_collision_trials(cfg);
  EXPECT_FALSE(report.records_complete);
  EXPECT_EQ(report.records.size(), kReservoirSize);
  EXPECT_EQ(report.aggregates.trials, cfg.trials);
  // Two uniform keys over two slots collide with probability 1/2.
  EXPECT_NEAR(report.aggregates.mean_value, 0.5, 0.005);
  for (const auto& rec : report.records) EXPECT_LT(rec.trial, cfg.trials);
}

TEST(RunCollisionTrials, RejectsBeforeRunning) {
  auto cfg = CollisionConfig("uniform", 10);
  cfg.bound.epsilon = 0.05;  // L eps^2 = 0.25
  EXPECT_THROW(run_collision_trials(cfg), std::invalid_argument);

  cfg = CollisionConfig("uniform", 10);
  cfg.load = 0.0;
  cfg.m = 1;
  EXPECT_THROW(run_collision_trials(cfg), std::invalid_argument);

  cfg = CollisionConfig("uniform", 10);
  cfg.bound.kind = "main";
  cfg.bound.delta = 2.0;  // implies m = eps^-2 64^3, not 6400
  cfg.bound.s = 1.0;
  EXPECT_THROW(run_collision_trials(cfg), std::invalid_argument);

  cfg = CollisionConfig("uniform", 10);
  cfg.bound.kind = "ast_eps";
  EXPECT_THROW(run_collision_trials(cfg), std::invalid_argument);

  cfg = CollisionConfig("gaussian", 10);
  EXPECT_THROW(run_collision_trials(cfg), std::invalid_argument);

  cfg = CollisionConfig("uniform", 0);
  EXPECT_THROW(run_collision_trials(cfg), std::invalid_argument);
}

TEST(RunCollisionTrials, DerivesMFromBoundRelation) {
  ExperimentConfig cfg;
  cfg.n = 100;
  cfg.trials = 3;
  cfg.bound.kind = "gr_form";
  cfg.bound.beta = 0.5;
  cfg.bound.lambda = 1.0;
  EXPECT_EQ(Experiment(cfg).m(), 10000u);  // 100^(1/2 + 1/2 + 1)
  cfg.bound.kind = "fixed_s";
  cfg.bound.epsilon = 0.1;
  cfg.bound.delta = 0.5;
  EXPECT_EQ(Experiment(cfg).m(), 100000u);
}

TEST(RunCollisionTrials, FixedTableHash) {
  auto cfg = CollisionConfig("uniform", 20);
  cfg.hash.mode = "table";
  cfg.hash.universe = 4096;
  cfg.hash.seed = 3;
  const Experiment exp(cfg);
  EXPECT_EQ(exp.hash().universe(), 4096u);
  EXPECT_EQ(exp.key_distribution().size(), 4096u);
  const auto report = exp.run();
  EXPECT_GT(report.p_norm_sq, 1.0 / 64.0);
}

TEST(RunAstTrials, UniformAccessAndKeys) {
  auto cfg = AstConfig(100);
  cfg.access.name = "uniform";
  const auto report = run_ast_trials(cfg);
  EXPECT_NEAR(report.bound.threshold, 100.0 * 2.2 + 1.0, 1e-9);
  EXPECT_EQ(report.aggregates.violations, 0u);
  for (const auto& rec : report.records) EXPECT_NEAR(rec.value, 100.0, 1e-9);
}

TEST(RunAstTrials, OrderingAndCoverage) {
  const auto report = run_ast_trials(AstConfig(1000));
  EXPECT_NEAR(report.v_norm, 1.0 / std::sqrt(10.0), 1e-15);
  EXPECT_NEAR(report.expected_value, 100.0, 1e-9);
  EXPECT_NEAR(report.bound.threshold,
              100.0 * 100.0 * (1.0 / std::sqrt(10.0)) * 0.1 * 2.2 + 1.0, 1e-9);
  EXPECT_EQ(report.aggregates.exact_le_upper, 1000u);
  for (const auto& rec : report.records) {
    EXPECT_LE(rec.ast_exact, rec.value);
    EXPECT_EQ(rec.violation, rec.value > report.bound.threshold);
  }
  EXPECT_EQ(report.aggregates.violations, 0u);
  std::ostringstream csv;
  write_report_csv(report, csv);
  EXPECT_EQ(csv.str().substr(0, 42), "trial,value,rel_error,violation,ast_exact\n");
}

TEST(RunAstTrials, BoundSVariant) {
  auto cfg = AstConfig(50);
  cfg.bound.kind = "ast_s";
  cfg.bound.s = 3.0;
  const auto report = run_ast_trials(cfg);
  const double expect = ast_bound_s(100.0, 100, 1.0 / std::sqrt(10.0), 0.1, 3.0).value;
  EXPECT_DOUBLE_EQ(report.bound.threshold, expect);
  cfg.bound.kind = "load_factor";
  EXPECT_THROW(run_ast_trials(cfg), std::invalid_argument);
}

TEST(ExperimentConfig, JsonRoundTrip) {
  auto cfg = AstConfig(42);
  cfg.hash.mode = "table";
  cfg.hash.universe = 1000;
  cfg.bound.delta = 0.25;
  const nlohmann::json j = cfg;
  const auto back = j.get<ExperimentConfig>();
  EXPECT_EQ(nlohmann::json(back).dump(), j.dump());

  const std::string path = std::string(CHAINHASH_TEST_TMPDIR) + "/config_test.json";
  std::ofstream(path) << R"({"experiment": "collision", "n": 32, "load": 50,
    "keys": {"name": "zipf", "zipf_exponent": 1.5}, "bound": {"kind": "load_factor", "epsilon": 0.2}})";
  const auto loaded = load_config(path);
  EXPECT_EQ(loaded.n, 32u);
  EXPECT_EQ(loaded.keys.name, "zipf");
  EXPECT_DOUBLE_EQ(loaded.keys.zipf_exponent, 1.5);
  EXPECT_DOUBLE_EQ(loaded.bound.epsilon, 0.2);
  EXPECT_FALSE(loaded.bound.delta.has_value());

  std::ofstream(path) << R"({"nn": 32})";
  EXPECT_THROW(load_config(path), std::invalid_argument);
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(load_config(path), std::invalid_argument);
}

TEST(PerturbationLemma, EdgeCases) {
  const auto h = HashModel::identity(16);
  const KeySequence x{1, 2, 3, 3, 15};
  const auto same = check_perturbation_lemma(x, x, h);
  EXPECT_EQ(same.lhs, 0u);
  EXPECT_EQ(same.rhs, 0u);
  EXPECT_TRUE(same.holds);

  KeySequence y = x;
  y[4] = 7;
  const auto one = check_perturbation_lemma(x, y, h);
  EXPECT_EQ(one.lhs, 2u);
  EXPECT_EQ(one.rhs, 2u);
  EXPECT_TRUE(one.holds);

  // A change within the same slot leaves counts unchanged.
  const auto table = HashModel::fixed_table({0, 0, 1, 1}, 2);
  const auto within = check_perturbation_lemma(KeySequence{0, 2}, KeySequence{1, 2}, table);
  EXPECT_EQ(within.lhs, 0u);
  EXPECT_EQ(within.rhs, 2u);

  EXPECT_THROW(check_perturbation_lemma(x, KeySequence{1}, h), std::invalid_argument);
}

TEST(PerturbationLemma, RandomPairs) {
  const auto h = HashModel::random_table(1000, 16, 8);
  const auto sweep = perturbation_sweep(h, 200, 2000, 99);
  EXPECT_EQ(sweep.pairs, 2000u);
  EXPECT_EQ(sweep.failures, 0u);
  EXPECT_GT(sweep.max_lhs, 0u);
  EXPECT_LE(sweep.max_rhs, 400u);
}

TEST(Unbiasedness, PointMassExact) {
  const auto r = unbiasedness_check(make_point_mass(8, 3), HashModel::identity(8), 10, 100, 1);
  EXPECT_TRUE(r.exact_match);
  EXPECT_TRUE(std::isnan(r.z_score));
  EXPECT_DOUBLE_EQ(r.sample_mean, 1.0);
}

TEST(Unbiasedness, SkewedTwoSlots) {
  const auto r = unbiasedness_check(ProbabilityVector::from_weights({0.9, 0.1}),
                                    HashModel::identity(2), 100, 20000, 4);
  EXPECT_NEAR(r.p_norm_sq, 0.82, 1e-15);
  EXPECT_LE(std::abs(r.z_score), 4.0);
  EXPECT_NEAR(r.sample_mean, 0.82, 0.01);
}

TEST(Unbiasedness, Preconditions) {
  const auto h = HashModel::identity(4);
  EXPECT_THROW(unbiasedness_check(make_uniform(4), h, 1, 1000, 0), std::invalid_argument);
  EXPECT_THROW(unbiasedness_check(make_uniform(4), h, 10, 99, 0), std::invalid_argument);
}

}  // namespace
}  // namespace chainhash
