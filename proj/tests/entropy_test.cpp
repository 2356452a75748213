#include <gtest/gtest.h>

#include <cmath>

#include "qguess/entropy.hpp"
#include "qguess/rng.hpp"

namespace qguess {
namespace {

using Ld = long double;

// Plain power sums in long double, no log-space tricks.
Ld sum_pow(const Pmf& p, Ld t) {
  Ld s = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) s += std::pow(static_cast<Ld>(p[i]), t);
  return s;
}

Ld norm(const Pmf& p, Ld t) { return std::pow(sum_pow(p, t), 1 / t); }

Ld lne_oracle(const Pmf& p, Ld a, Ld b) { return a * b / (b - a) * std::log(norm(p, a) / norm(p, b)); }

Ld relative_oracle(const Pmf& p, const Pmf& q, Ld a, Ld b) {
  Ld cross = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    cross += std::pow(static_cast<Ld>(p[i]), b) * std::pow(static_cast<Ld>(q[i]), a - b);
  return std::log(sum_pow(p, a)) / (a - b) - a / (b * (a - b)) * std::log(cross) + std::log(sum_pow(q, a)) / b;
}

// Self-terms with exponent beta instead of alpha.
Ld printed_relative(const Pmf& p, const Pmf& q, Ld a, Ld b) {
  Ld cross = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    cross += std::pow(static_cast<Ld>(p[i]), b) * std::pow(static_cast<Ld>(q[i]), a - b);
  return std::log(sum_pow(p, b)) / (a - b) - a / (b * (a - b)) * std::log(cross) + std::log(sum_pow(q, b)) / b;
}

// Arimoto-style conditional Renyi entropy: a/(1-a) ln sum_y (sum_x P(x,y)^a)^(1/a)
Ld conditional_renyi_oracle(const JointPmf& j, Ld a) {
  Ld outer = 0;
  for (Eigen::Index y = 0; y < j.y_size(); ++y) {
    Ld inner = 0;
    for (Eigen::Index x = 0; x < j.x_size(); ++x) inner += std::pow(static_cast<Ld>(j(y, x)), a);
    outer += std::pow(inner, 1 / a);
  }
  return a / (1 - a) * std::log(outer);
}

const Pmf p82 = make_pmf({0.8, 0.2});
const Pmf u2 = make_pmf({1.0, 1.0});

TEST(Shannon, Examples) {
  EXPECT_NEAR(shannon(u2), std::log(2.0), 1e-15);
  EXPECT_NEAR(shannon(p82), -0.8 * std::log(0.8) - 0.2 * std::log(0.2), 1e-15);
}

TEST(Renyi, Examples) {
  const auto u5 = make_pmf({1.0, 1.0, 1.0, 1.0, 1.0});
  for (double a : {0.3, 0.5, 2.0, 7.0}) EXPECT_NEAR(renyi(u5, a), std::log(5.0), 1e-14);
  EXPECT_NEAR(renyi(p82, 2.0), -std::log(0.68), 1e-15);
  EXPECT_NEAR(renyi(p82, 1.0), shannon(p82), 1e-15);
  EXPECT_NEAR(renyi(p82, 1.0 + 1e-7), shannon(p82), 1e-7);
  EXPECT_THROW(renyi(p82, 0.0), Error);
}

TEST(Lne, MatchesNormOracle) {
  EXPECT_NEAR(lne(p82, {0.5, 2.0}), static_cast<double>(lne_oracle(p82, 0.5L, 2.0L)), 1e-14);
  CounterRng rng({3});
  for (int t = 0; t < 50; ++t) {
    const auto p = random_pmf(rng, 2 + t % 7);
    for (auto [a, b] : {std::pair{0.5, 2.0}, {2.0, 0.5}, {0.25, 3.0}, {1.5, 1.25}})
      EXPECT_NEAR(lne(p, {a, b}), static_cast<double>(lne_oracle(p, a, b)), 1e-12);
  }
}

TEST(Lne, ReducesToRenyiWhenAnOrderIsOne) {
  CounterRng rng({5});
  const auto p = random_pmf(rng, 6);
  EXPECT_NEAR(lne(p, {0.5, 1.0}), renyi(p, 0.5), 1e-13);
  EXPECT_NEAR(lne(p, {1.0, 3.0}), renyi(p, 3.0), 1e-13);
}

TEST(Lne, UniformIsLogM) {
  const auto u = make_pmf({1.0, 1.0, 1.0, 1.0});
  EXPECT_NEAR(lne(u, {0.5, 2.0}), std::log(4.0), 1e-14);
  EXPECT_NEAR(lne_diag(u, 2.0), std::log(4.0), 1e-14);
}

TEST(Lne, DiagonalRequiresDiagForm) {
  try {
    lne(p82, {2.0, 2.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateParameters);
  }
}

TEST(LneDiag, Limits) {
  EXPECT_NEAR(lne_diag(p82, 1.0), shannon(p82), 1e-15);
  for (double eps : {1e-6, -1e-6}) EXPECT_NEAR(lne_diag(p82, 2.0), lne(p82, {2.0, 2.0 + eps}), 1e-4);
}

TEST(Clne, SingleRowIsLne) {
  CounterRng rng({9});
  const auto p = random_pmf(rng, 5);
  EXPECT_NEAR(clne(as_joint(p), {0.5, 2.0}), lne(p, {0.5, 2.0}), 1e-13);
  EXPECT_NEAR(clne_diag(as_joint(p), 1.0), shannon(p), 1e-13);
}

TEST(Clne, UniformIsLogM) {
  const auto j = make_joint<double>(Matrix<double>::Ones(3, 4));
  EXPECT_NEAR(clne(j, {0.5, 2.0}), std::log(4.0), 1e-14);
  EXPECT_NEAR(clne_diag(j, 0.7), std::log(4.0), 1e-14);
}

TEST(Clne, BetaOneIsConditionalRenyi) {
  CounterRng rng({13});
  for (int t = 0; t < 20; ++t) {
    const auto j = random_joint(rng, 2 + t % 4, 2 + t % 3);
    for (double a : {0.5, 2.0}) EXPECT_NEAR(clne(j, {a, 1.0}), static_cast<double>(conditional_renyi_oracle(j, a)), 1e-12);
  }
}

TEST(ClneDiag, NumericLimit) {
  CounterRng rng({17});
  const auto j = random_joint(rng, 4, 3);
  for (double a : {0.5, 1.0, 2.0})
    for (double eps : {1e-6, -1e-6}) EXPECT_NEAR(clne_diag(j, a), clne(j, {a, a + eps}), 1e-4);
}

TEST(Kl, Examples) {
  EXPECT_NEAR(kl(p82, p82), 0.0, 1e-16);
  EXPECT_NEAR(kl(u2, u2), 0.0, 1e-16);
  EXPECT_NEAR(kl(u2, p82), 0.5 * std::log(0.5 / 0.8) + 0.5 * std::log(0.5 / 0.2), 1e-15);
}

TEST(RelativeAB, Examples) {
  EXPECT_NEAR(relative_ab(p82, p82, {0.5, 2.0}), 0.0, 1e-15);
  const double v = relative_ab(p82, u2, {0.5, 2.0});
  EXPECT_GT(v, 0.0);
  EXPECT_NEAR(v, static_cast<double>(relative_oracle(p82, u2, 0.5L, 2.0L)), 1e-14);
  EXPECT_GT(relative_ab(u2, p82, {2.0, 0.5}), 0.0);
}

TEST(RelativeAB, PrintedSelfTermsDoNotVanish) {
  // beta-power self-terms give a nonzero value at P = Q
  EXPECT_NEAR(static_cast<double>(printed_relative(p82, p82, 2.0L, 0.5L)), 1.812, 1e-3);
  EXPECT_NEAR(relative_ab(p82, p82, {2.0, 0.5}), 0.0, 1e-15);
}

TEST(RelativeAB, NonNegativeOnRandomPairs) {
  CounterRng rng({19});
  for (int t = 0; t < 200; ++t) {
    const int m = 2 + t % 6;
    const auto p = random_pmf(rng, m);
    const auto q = random_pmf(rng, m);
    for (auto [a, b] : {std::pair{0.5, 2.0}, {2.0, 0.5}, {1.0, 3.0}, {0.3, -1.0}})
      EXPECT_GE(relative_ab(p, q, {a, b}), -1e-12);
  }
}

TEST(RelativeAB, DomainErrors) {
  const auto p3 = make_pmf({1.0, 2.0, 3.0});
  EXPECT_THROW(relative_ab(p82, p3, {0.5, 2.0}), Error);
  EXPECT_THROW(relative_ab(p82, u2, {0.5, 0.5}), Error);
  EXPECT_THROW(relative_ab(p82, u2, {0.5, 0.0}), Error);
  EXPECT_THROW(AlphaBeta(-1.0, 2.0), Error);
}

TEST(RelativeABCond, SingleRowAndZero) {
  CounterRng rng({23});
  const auto p = random_pmf(rng, 4);
  const auto q = random_pmf(rng, 4);
  EXPECT_NEAR(relative_ab_cond(as_joint(p), as_joint(q), {0.5, 2.0}), relative_ab(p, q, {0.5, 2.0}), 1e-13);
  const auto j = random_joint(rng, 3, 2);
  EXPECT_NEAR(relative_ab_cond(j, j, {2.0 / 3.0, 2.0}), 0.0, 1e-14);
}

TEST(RelativeABCond, RowScaleInvariantInReference) {
  CounterRng rng({29});
  const auto p = random_joint(rng, 3, 2);
  const auto q = random_joint(rng, 3, 2);
  Matrix<double> scaled = q.probs();
  scaled.row(0) *= 5.0;
  const auto q2 = validate_joint<double>(q.x_labels(), q.y_labels(), scaled);
  EXPECT_NEAR(relative_ab_cond(p, q, {0.5, 1.0}), relative_ab_cond(p, q2, {0.5, 1.0}), 1e-13);
}

TEST(LongDouble, AgreesWithDouble) {
  CounterRng rng({31});
  const auto j = random_joint(rng, 5, 3);
  const auto jl = j.cast<long double>();
  EXPECT_NEAR(clne(j, {0.5, 2.0}), static_cast<double>(clne(jl, {0.5, 2.0})), 1e-13);
  EXPECT_NEAR(clne_diag(j, 2.0), static_cast<double>(clne_diag(jl, 2.0)), 1e-13);
}

}  // namespace
}  // namespace qguess
