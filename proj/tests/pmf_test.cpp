#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "qguess/pmf.hpp"
#include "qguess/rng.hpp"

namespace qguess {
namespace {

Matrix<double> rows(std::initializer_list<std::initializer_list<double>> r) {
  Matrix<double> m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index y = 0;
  for (const auto& row : r) {
    Eigen::Index x = 0;
    for (double v : row) m(y, x++) = v;
    ++y;
  }
  return m;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::ParseError;
}

TEST(ValidatePmf, Normalizes) {
  const auto p = validate_pmf({"a", "b"}, {1.0, 1.0});
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
  const auto single = validate_pmf({"a"}, {7.3});
  EXPECT_DOUBLE_EQ(single[0], 1.0);
}

TEST(ValidatePmf, RejectsBadInput) {
  EXPECT_EQ(code_of([] { validate_pmf({"a", "b"}, {0.0, 1.0}); }), ErrorCode::NonPositiveWeight);
  EXPECT_EQ(code_of([] { validate_pmf({"a", "b"}, {-1.0, 1.0}); }), ErrorCode::NonPositiveWeight);
  EXPECT_EQ(code_of([] { validate_pmf({"a", "b"}, {std::nan(""), 1.0}); }), ErrorCode::NonPositiveWeight);
  EXPECT_EQ(code_of([] { validate_pmf<double>({}, {}); }), ErrorCode::EmptyAlphabet);
  EXPECT_EQ(code_of([] { validate_pmf({"a", "a"}, {1.0, 1.0}); }), ErrorCode::DuplicateLabel);
}

TEST(ValidatePmf, ErrorMessageStartsWithName) {
  try {
    validate_pmf({"a", "b"}, {0.0, 1.0});
  } catch (const Error& e) {
    EXPECT_EQ(std::string(e.what()).rfind("NonPositiveWeight", 0), 0u);
  }
}

TEST(PowerSum, Examples) {
  CounterRng rng({7});
  const auto p = random_pmf(rng, 5);
  EXPECT_NEAR(power_sum(p, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(power_sum(p, 0.0), 5.0, 1e-14);
  EXPECT_DOUBLE_EQ(power_sum(make_pmf({0.5, 0.5}), 2.0), 0.5);
}

TEST(Escort, Examples) {
  const auto p = make_pmf({0.8, 0.2});
  const auto e = escort(p, 2.0);
  EXPECT_NEAR(e[0], 16.0 / 17.0, 1e-15);
  EXPECT_NEAR(e[1], 1.0 / 17.0, 1e-15);
  EXPECT_TRUE(escort(p, 1.0).probs().isApprox(p.probs(), 1e-15));
  const auto u = make_pmf({1.0, 1.0, 1.0});
  for (double q : {-2.0, 0.5, 3.0})
    for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(escort(u, q)[i], 1.0 / 3.0, 1e-15);
}

TEST(Escort, NegativeOrderStaysFinite) {
  const auto p = validate_pmf({"a", "b", "c"}, {1e-9, 1.0 - 2e-9, 1e-9});
  const auto e = escort(p, -2.0);
  EXPECT_TRUE(e.probs().allFinite());
  EXPECT_NEAR(e.probs().sum(), 1.0, 1e-15);
  EXPECT_NEAR(e[0], 0.5, 1e-12);
}

TEST(Joint, MarginalAndConditional) {
  const auto j = make_joint(rows({{0.4, 0.1}, {0.2, 0.3}}));
  const auto c = conditional_given_y(j, Eigen::Index{1});
  EXPECT_NEAR(c[0], 0.4, 1e-15);
  EXPECT_NEAR(c[1], 0.6, 1e-15);
  const auto m = marginal_y(j);
  EXPECT_NEAR(m[0], 0.5, 1e-15);
  EXPECT_NEAR(m[1], 0.5, 1e-15);
  const auto u = make_joint(rows({{1, 1}, {1, 1}}));
  EXPECT_NEAR(conditional_given_y(u, Eigen::Index{0})[0], 0.5, 1e-15);
  EXPECT_EQ(code_of([&] { conditional_given_y(j, std::string("nope")); }), ErrorCode::UnknownLabel);
}

TEST(Joint, ProductConditionalsEqualMarginal) {
  CounterRng rng({11});
  const auto px = random_pmf(rng, 4);
  const auto py = random_pmf(rng, 3);
  const auto j = product_joint(px, py);
  for (Eigen::Index y = 0; y < 3; ++y)
    EXPECT_TRUE(conditional_given_y(j, y).probs().isApprox(px.probs(), 1e-14));
}

TEST(Joint, EscortExamples) {
  const auto j = make_joint(rows({{0.4, 0.1}, {0.2, 0.3}}));
  const auto e = escort_joint(j, 2.0);
  EXPECT_NEAR(e(0, 0), 0.16 / 0.30, 1e-15);
  EXPECT_NEAR(e(0, 1), 0.01 / 0.30, 1e-15);
  EXPECT_NEAR(e(1, 0), 0.04 / 0.30, 1e-15);
  EXPECT_NEAR(e(1, 1), 0.09 / 0.30, 1e-15);
  EXPECT_TRUE(escort_joint(j, 1.0).probs().isApprox(j.probs(), 1e-15));
}

TEST(Joint, RejectsZeroCell) {
  EXPECT_EQ(code_of([] { make_joint(rows({{0.5, 0.0}, {0.2, 0.3}})); }), ErrorCode::NonPositiveWeight);
}

TEST(Rng, DeterministicAndInSimplex) {
  CounterRng a({1, 2, 3});
  CounterRng b({1, 2, 3});
  CounterRng c({1, 2, 4});
  const auto pa = random_pmf(a, 6);
  EXPECT_EQ(pa.probs(), random_pmf(b, 6).probs());
  EXPECT_NE(pa.probs(), random_pmf(c, 6).probs());
  EXPECT_NEAR(pa.probs().sum(), 1.0, 1e-15);
  EXPECT_GT(pa.probs().minCoeff(), 0.0);
}

TEST(Cast, LongDoubleAgrees) {
  const auto p = make_pmf({0.3, 0.7});
  const auto l = p.cast<long double>();
  EXPECT_NEAR(static_cast<double>(l[0]), 0.3, 1e-16);
}

}  // namespace
}  // namespace qguess
