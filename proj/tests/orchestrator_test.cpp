#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <type_traits>

#include "generators.hpp"
#include "kqsat/oracle.hpp"
#include "kqsat/orchestrator.hpp"

namespace kqsat {
namespace {

double residual(const ResourceModel& rm) {
  const double g = rm.gamma;
  return rm.A * g * std::log2(1 / g) + rm.B * g - rm.c;
}

TEST(Resource, DefaultConstants) {
  auto rm = solve_resource(1, 1, 0.3);
  EXPECT_NEAR(rm.gamma, 0.0597, 1e-3);
  EXPECT_LE(std::abs(residual(rm)), 1e-9);
  EXPECT_EQ(rm.r_max(100), static_cast<std::size_t>(std::floor(rm.gamma * 100)));
}

TEST(Resource, SmallestRootAndLimit) {
  double prev = 1;
  for (double c : {0.3, 0.1, 0.01, 1e-3, 1e-5}) {
    auto rm = solve_resource(1, 1, c);
    EXPECT_LE(std::abs(residual(rm)), 1e-9);
    EXPECT_LT(rm.gamma, prev);
    prev = rm.gamma;
  }
  EXPECT_LT(prev, 1e-5);
  auto other = solve_resource(2, 0.5, 0.4);
  EXPECT_LE(std::abs(residual(other)), 1e-9);
}

TEST(Resource, Errors) {
  EXPECT_THROW(solve_resource(0, 1, 0.3), ConfigError);
  EXPECT_THROW(solve_resource(1, 1, 0.0), ConfigError);
  EXPECT_THROW(solve_resource(1, 0.01, 0.9), ConfigError);
  EXPECT_EQ(fixed_resource(3).r_max(50), 3u);
}

TEST(Exponent, AnchorsAndMonotone) {
  EXPECT_NEAR(exponent(3, 0), 0.41504, 1e-5);
  EXPECT_NEAR(exponent(3, 0.1), 0.41504 - 0.1 * std::log2(2 / std::sqrt(3.0)), 1e-5);
  for (std::size_t K : {3, 4, 5, 8})
    for (double g = 0; g < 0.9; g += 0.05) EXPECT_GT(exponent(K, g), exponent(K, g + 0.05));
  EXPECT_THROW(exponent(2, 0.1), std::invalid_argument);
}

TEST(CoverFor, BlockSelection) {
  auto c = cover_for(9, 1.0 / 3, 14);
  EXPECT_EQ(c.radius, 3u);
  EXPECT_TRUE(verify_cover(c).covered);
  auto split = cover_for(18, 1.0 / 3, 14);
  EXPECT_EQ(split.word_length, 18u);
  EXPECT_EQ(split.radius, 6u);
  EXPECT_THROW(cover_for(17, 1.0 / 3, 14), ConfigError);
  auto empty = cover_for(0, 1.0 / 3, 14);
  EXPECT_EQ(empty.codewords.size(), 1u);
}

TEST(CoverFor, DiskCache) {
  const auto dir = std::filesystem::temp_directory_path() / "kqsat_cover_cache_test";
  std::filesystem::remove_all(dir);
  auto a = cover_for(8, 0.25, 14, dir);
  ASSERT_FALSE(std::filesystem::is_empty(dir));
  auto b = cover_for(8, 0.25, 14, dir);
  EXPECT_EQ(a.codewords, b.codewords);
  std::filesystem::remove_all(dir);
}

TEST(Messages, CarryOnlyClassicalData) {
  static_assert(std::is_copy_constructible_v<TaskMessage>);
  static_assert(std::is_copy_constructible_v<ResultMessage>);
  TaskMessage t;
  t.formula = testing::example_formula();
  TaskMessage copy = t;
  EXPECT_EQ(copy.formula, t.formula);
}

SolveConfig config(std::size_t k, std::uint64_t seed, std::size_t workers = 0) {
  SolveConfig cfg;
  cfg.k = k;
  cfg.seed = seed;
  cfg.workers = workers;
  return cfg;
}

TEST(Solve, ExampleFormula) {
  auto res = solve(testing::example_formula(), config(1, 3), solve_resource(1, 1, 0.3));
  ASSERT_EQ(res.status, SolveStatus::Sat);
  EXPECT_TRUE(evaluate(testing::example_formula(), res.model));
}

TEST(Solve, Unsatisfiable) {
  // All eight sign patterns over x1..x3.
  std::vector<Clause> all;
  for (int m = 0; m < 8; ++m)
    all.push_back({{1, (m & 1) != 0}, {2, (m & 2) != 0}, {3, (m & 4) != 0}});
  Formula f(8, all);
  for (std::size_t k : {0, 1, 2}) {
    auto res = solve(f, config(k, 1), fixed_resource(2));
    EXPECT_EQ(res.status, SolveStatus::False);
    EXPECT_GT(res.stats.failure_bound, 0.0);
    EXPECT_LE(res.stats.failure_bound, 1.0);
  }
}

TEST(Solve, AgreesWithBruteForce) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 6 + rng() % 5;
    auto f = testing::random_ksat(rng, n, static_cast<std::size_t>(n * (3.5 + (rng() % 150) / 100.0)), 3);
    const bool sat = oracle::brute_sat(f).has_value();
    for (std::size_t k : {0, 2}) {
      auto res = solve(f, config(k, trial), fixed_resource(1 + trial % 2));
      EXPECT_EQ(res.status == SolveStatus::Sat, sat) << trial << " k=" << k;
      if (res.status == SolveStatus::Sat) EXPECT_TRUE(evaluate(f, res.model));
      EXPECT_LE(res.stats.dispatches, (std::size_t{1} << k) * res.stats.cover_size);
    }
  }
}

TEST(Solve, ClassicalModeMakesNoQuantumCalls) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = testing::random_ksat(rng, 9, 38, 3);
    auto cfg = config(1, trial);
    cfg.mode = SolveMode::Classical;
    auto res = solve(f, cfg, fixed_resource(2));
    EXPECT_EQ(res.stats.quantum_calls, 0u);
    EXPECT_EQ(res.status == SolveStatus::Sat, oracle::brute_sat(f).has_value());
  }
}

TEST(Solve, DeterministicWithOneWorker) {
  std::mt19937_64 rng(33);
  auto hidden = testing::random_assignment(rng, 12);
  auto f = testing::planted_ksat(rng, hidden, 50, 3);
  auto a = solve(f, config(2, 77, 1), fixed_resource(2));
  auto b = solve(f, config(2, 77, 1), fixed_resource(2));
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.records.size(), b.records.size());
  EXPECT_EQ(a.stats.branches, b.stats.branches);
  EXPECT_EQ(a.stats.dispatches, b.stats.dispatches);
}

TEST(Solve, ParallelWorkersStillSound) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    auto hidden = testing::random_assignment(rng, 11);
    auto f = testing::planted_ksat(rng, hidden, 46, 3);
    auto res = solve(f, config(2, trial, 4), fixed_resource(2));
    ASSERT_EQ(res.status, SolveStatus::Sat);
    EXPECT_TRUE(evaluate(f, res.model));
  }
}

TEST(Solve, ConfigurationErrors) {
  auto f = testing::example_formula();
  EXPECT_THROW(solve(f, config(5, 1), fixed_resource(1)), ConfigError);
  auto bad = config(0, 1);
  bad.epsilon = 1.5;
  EXPECT_THROW(solve(f, bad, fixed_resource(1)), ConfigError);
  auto big = config(0, 1);
  big.K = 3;
  Formula wide(4, {{{1, false}, {2, false}, {3, false}, {4, false}}});
  EXPECT_THROW(solve(wide, big, fixed_resource(1)), ConfigError);
}

}  // namespace
}  // namespace kqsat
