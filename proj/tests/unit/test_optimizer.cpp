#include <gtest/gtest.h>

#include <cmath>

#include "forster/errors.hpp"
#include "forster/optimizer.hpp"

using namespace forster;

namespace {

OptimizationProblem bowl() {
  OptimizationProblem p;
  p.objective = [](const std::vector<double>& x) {
    return 1.0 - (x[0] - 0.3) * (x[0] - 0.3) - 2.0 * (x[1] + 0.2) * (x[1] + 0.2);
  };
  p.names = {"a", "b"};
  p.lower = {-1, -1};
  p.upper = {1, 1};
  p.start = {0.8, 0.6};
  p.budget = 400;
  return p;
}

}  // namespace

TEST(NelderMead, QuadraticBowl) {
  const auto p = bowl();
  auto neg = [&](const std::vector<double>& x) { return -p.objective(x); };
  const auto r = nelder_mead(neg, p.start, p.lower, p.upper, {0.1, 1e-10, 2000});
  EXPECT_NEAR(r.x[0], 0.3, 1e-4);
  EXPECT_NEAR(r.x[1], -0.2, 1e-4);
  EXPECT_TRUE(r.converged);
}

TEST(NelderMead, RespectsBounds) {
  auto f = [](const std::vector<double>& x) { return x[0]; };
  const auto r = nelder_mead(f, {0.5}, {0.2}, {1.0}, {0.1, 1e-10, 500});
  EXPECT_GE(r.x[0], 0.2);
  EXPECT_NEAR(r.x[0], 0.2, 1e-6);
}

TEST(Optimize, FindsBowlMaximumWithinBudget) {
  const auto p = bowl();
  const auto r = optimize(p);
  EXPECT_NEAR(r.best_value, 1.0, 1e-6);
  EXPECT_LE(static_cast<int>(r.log.size()), p.budget);
  EXPECT_GE(r.best_value, r.start_value);
  for (const auto& e : r.log) {
    for (std::size_t k = 0; k < 2; ++k) {
      EXPECT_GE(e.x[k], p.lower[k]);
      EXPECT_LE(e.x[k], p.upper[k]);
    }
  }
}

TEST(Optimize, SeedDeterminism) {
  auto p = bowl();
  p.budget = 150;
  p.nelder_mead.max_evaluations = 30;
  const auto a = optimize(p), b = optimize(p);
  ASSERT_EQ(a.log.size(), b.log.size());
  for (std::size_t k = 0; k < a.log.size(); ++k) {
    EXPECT_EQ(a.log[k].x, b.log[k].x);
    EXPECT_EQ(a.log[k].value, b.log[k].value);
  }
  p.seed = 2;
  const auto c = optimize(p);
  bool differs = false;
  for (std::size_t k = 0; k < std::min(a.log.size(), c.log.size()); ++k) differs |= a.log[k].x != c.log[k].x;
  EXPECT_TRUE(differs);
}

// Worse proposals are accepted with probability exp(-delta / T).
TEST(Optimize, AnnealingAcceptanceStatistics) {
  OptimizationProblem p;
  p.objective = [](const std::vector<double>& x) { return std::sin(7 * x[0]) * std::cos(5 * x[1]); };
  p.names = {"a", "b"};
  p.lower = {0, 0};
  p.upper = {1, 1};
  p.start = {0.5, 0.5};
  p.budget = 6000;
  p.nelder_mead.max_evaluations = 1;
  p.annealing.initial_temperature = 0.05;
  p.annealing.cooling = 0.99;
  p.annealing.proposal_scale = 0.05;
  const auto r = optimize(p);
  double expected = 0.0, var = 0.0;
  int accepted = 0, worse = 0;
  for (const auto& e : r.log) {
    if (e.stage != 'a' || e.delta <= 0) continue;
    const double q = std::exp(-e.delta / e.temperature);
    expected += q;
    var += q * (1 - q);
    accepted += e.accepted;
    ++worse;
  }
  ASSERT_GT(worse, 500);
  EXPECT_LT(std::abs(accepted - expected), 4 * std::sqrt(var));
}

TEST(Optimize, BudgetExhaustionFlagged) {
  auto p = bowl();
  p.budget = 10;
  const auto r = optimize(p);
  EXPECT_TRUE(r.budget_exhausted);
  EXPECT_EQ(r.log.size(), 10u);
}

TEST(Sensitivity, QuadraticHalfWidth) {
  const auto r = sensitivity_scan([](double d) { return 0.99 - 4.0 * d * d; }, 1e-3, {1e-4, 1e-3, 40});
  EXPECT_NEAR(r.half_width, std::sqrt(1e-3 / 4.0), 1e-3 * std::sqrt(1e-3 / 4.0) * 2);
  EXPECT_TRUE(r.monotone);
}

TEST(Sensitivity, AsymmetricTakesNarrowSide) {
  auto f = [](double d) { return 1.0 - (d > 0 ? 1e-2 * d : 1e-3 * -d); };
  const auto r = sensitivity_scan(f, 1e-3, {0.01, 1e-3, 40});
  EXPECT_NEAR(r.plus, 0.1, 1e-3);
  EXPECT_NEAR(r.minus, 1.0, 1e-2);
  EXPECT_EQ(r.half_width, r.plus);
}

TEST(Sensitivity, FlatResponseFails) {
  EXPECT_THROW(sensitivity_scan([](double) { return 1.0; }, 1e-3, {1e-3, 1e-2, 10}), NonConvergenceError);
}

TEST(Sensitivity, HalfWidthGrowsWithBudget) {
  auto f = [](double d) { return 0.99 - 3.0 * d * d - 40.0 * d * d * d * d; };
  const auto tight = sensitivity_scan(f, 5e-4, {1e-4, 1e-3, 40});
  const auto loose = sensitivity_scan(f, 1e-3, {1e-4, 1e-3, 40});
  EXPECT_LT(tight.half_width, loose.half_width);
}
