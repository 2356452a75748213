#include <gtest/gtest.h>

#include <cmath>

#include "qguess/entropy.hpp"
#include "qguess/harness.hpp"
#include "qguess/minimax.hpp"
#include "qguess/rng.hpp"

namespace qguess {
namespace {

const JointPmf p82 = as_joint(make_pmf({0.8, 0.2}));
const JointPmf p28 = as_joint(make_pmf({0.2, 0.8}));

TEST(WorstRedundancy, Examples) {
  const NEParams params(1.0, 1.0);
  EXPECT_NEAR(worst_redundancy(SourceFamily({p82}), optimal_strategy(p82, 1.0), params), 0.0, 1e-15);
  const auto u = as_joint(make_pmf({1.0, 1.0, 1.0}));
  CounterRng rng({1});
  EXPECT_NEAR(worst_redundancy(SourceFamily({u, u}), random_strategy(rng, u.x_labels(), u.y_labels()), params), 0.0, 1e-15);
  EXPECT_NEAR(worst_redundancy(SourceFamily({p82, p28}), optimal_strategy(p82, 1.0), params),
              std::log(1.8) - std::log(1.2), 1e-15);
}

TEST(SourceFamily, Validation) {
  EXPECT_THROW(SourceFamily({}), Error);
  const auto p3 = as_joint(make_pmf({1.0, 2.0, 3.0}));
  try {
    SourceFamily({p82, p3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AlphabetMismatch);
  }
}

TEST(SolveMinimax, SingletonReturnsSource) {
  CounterRng rng({2});
  const auto p = random_joint(rng, 3, 2);
  const auto r = solve_minimax(SourceFamily({p}), {1.0, 1.0});
  EXPECT_NEAR(r.c_value, 0.0, 1e-9);
  EXPECT_LT((r.q_star.probs() - p.probs()).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_TRUE(r.converged);
}

TEST(SolveMinimax, SymmetricPair) {
  const SourceFamily family({p82, p28});
  const NEParams params(1.0, 1.0);
  const auto r = solve_minimax(family, params);
  EXPECT_NEAR(r.q_star.probs()(0, 0), 0.5, 1e-4);
  const auto half = as_joint(make_pmf({1.0, 1.0}));
  const double expected = relative_ab_cond(p82, half, {0.5, 1.0});
  EXPECT_NEAR(r.c_value, expected, 1e-7);
  const double grid = harness::grid_minimax(family, params, 1e-4);
  EXPECT_NEAR(grid, r.c_value, 1e-3);
  EXPECT_GE(grid, r.c_value - 1e-9);
  EXPECT_GE(r.certificate_gap, 0.0);
  EXPECT_LT(r.certificate_gap, 1e-3);
}

TEST(SolveMinimax, MatchesDenseGridOnTriangle) {
  CounterRng rng({3});
  for (int t = 0; t < 3; ++t) {
    const SourceFamily family({as_joint(random_pmf(rng, 3)), as_joint(random_pmf(rng, 3))});
    for (auto params : {NEParams(1.0, 1.0), NEParams(2.0, 0.5)}) {
      const auto r = solve_minimax(family, params);
      const double grid = harness::grid_minimax(family, params, 1e-3);
      EXPECT_NEAR(grid, r.c_value, 1e-3);
      EXPECT_GE(grid, r.c_value - 1e-9);
    }
  }
}

TEST(SolveMinimax, Deterministic) {
  CounterRng rng({4});
  const SourceFamily family({as_joint(random_pmf(rng, 4)), as_joint(random_pmf(rng, 4))});
  const auto a = solve_minimax(family, {0.5, 2.0});
  const auto b = solve_minimax(family, {0.5, 2.0});
  EXPECT_EQ(a.c_value, b.c_value);
  EXPECT_EQ(a.q_star.probs(), b.q_star.probs());
}

TEST(SolveMinimax, Errors) {
  const SourceFamily family({p82, p28});
  EXPECT_THROW(solve_minimax(family, {-1.0, 1.0}), Error);
  SolverConfig bad;
  bad.tol = 0.0;
  EXPECT_THROW(solve_minimax(family, {1.0, 1.0}, bad), Error);
  SolverConfig capped;
  capped.max_iterations = 1;
  capped.restarts = 0;
  const SourceFamily skewed({as_joint(make_pmf({0.7, 0.2, 0.1})), as_joint(make_pmf({0.1, 0.3, 0.6}))});
  EXPECT_FALSE(solve_minimax(skewed, {1.0, 1.0}, capped).converged);
}

TEST(RobustStrategy, Singleton) {
  CounterRng rng({5});
  const auto p = as_joint(random_pmf(rng, 4));
  const auto r = robust_strategy(SourceFamily({p}), {1.0, 1.0});
  EXPECT_EQ(r.strategy, optimal_strategy(p, 1.0));
  EXPECT_NEAR(r.report.moment, 0.0, 1e-12);
  EXPECT_FALSE(r.report.violated);
  EXPECT_EQ(r.report.theorem_id, TheoremId::M4);
}

TEST(RobustStrategy, ThreeMembersExhaustive) {
  CounterRng rng({6});
  std::vector<JointPmf> members;
  for (int i = 0; i < 3; ++i) members.push_back(as_joint(random_pmf(rng, 4)));
  const SourceFamily family(members);
  const NEParams params(1.0, 1.0);
  const auto r = robust_strategy(family, params);
  EXPECT_TRUE(r.exhaustive);
  EXPECT_EQ(r.strategies_checked, 24u);
  const double slack = log_harmonic_slack(4);
  EXPECT_LE(r.report.moment, r.minimax.c_value + slack);
  EXPECT_GE(r.best_worst_redundancy, r.minimax.c_value - slack);
  EXPECT_FALSE(r.report.violated);
}

TEST(GridMinimax, Errors) {
  CounterRng rng({7});
  const auto big = as_joint(random_pmf(rng, 5));
  try {
    harness::grid_minimax(SourceFamily({big}), {1.0, 1.0}, 1e-2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionTooLarge);
  }
  EXPECT_NEAR(harness::grid_minimax(SourceFamily({p82}), {1.0, 1.0}, 1e-3), 0.0, 1e-6);
}

}  // namespace
}  // namespace qguess
