#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "qguess/entropy.hpp"
#include "qguess/harness.hpp"

namespace qguess::harness {
namespace {

SweepConfig small(int trials = 4) {
  SweepConfig c;
  c.trials = trials;
  c.alphabet_sizes = {2, 3, 4};
  return c;
}

TEST(SweepConfig, Validation) {
  SweepConfig c = small();
  c.trials = 0;
  EXPECT_THROW(c.validate(), Error);
  c = small();
  c.q_grid.clear();
  EXPECT_THROW(c.validate(), Error);
  c = small();
  c.tolerance = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c = small();
  c.trials = 0;
  EXPECT_THROW(run_sweep(c), Error);
}

TEST(SweepConfig, FromJson) {
  const auto c = sweep_config_from_json(nlohmann::json::parse(R"({"seed": 5, "trials": 7, "q_grid": [1.0]})"));
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.trials, 7);
  EXPECT_EQ(c.q_grid, std::vector<double>{1.0});
  try {
    sweep_config_from_json(nlohmann::json::parse(R"({"trials": "many"})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
  }
  try {
    sweep_config_from_json(nlohmann::json::parse(R"({"trials": 0})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
  }
}

TEST(RunSweep, CleanAndDeterministic) {
  const auto a = run_sweep(small());
  EXPECT_EQ(a.failures(), 0u);
  for (const auto& c : a.checks) {
    EXPECT_TRUE(c.passed()) << c.name;
    EXPECT_GT(c.evaluations, 0u) << c.name;
    EXPECT_TRUE(c.counterexamples.empty()) << c.name;
  }
  std::ostringstream first, second;
  a.write_csv(first);
  run_sweep(small()).write_csv(second);
  EXPECT_EQ(first.str(), second.str());
  EXPECT_EQ(first.str().substr(0, first.str().find('\n')),
            "theorem_id,q,rho,alphabet_x,alphabet_y,seed,moment,lower,upper,slack_lower,slack_upper,violated");
}

TEST(RunSweep, SeedChangesInstances) {
  SweepConfig other = small();
  other.seed += 1;
  std::ostringstream a, b;
  run_sweep(small()).write_csv(a);
  run_sweep(other).write_csv(b);
  EXPECT_NE(a.str(), b.str());
}

TEST(Mutations, PerturbedBoundIsCaught) {
  const auto r = check_theorem1(small(), Mutation::BoundL);
  EXPECT_GT(r.failures, 0u);
  EXPECT_FALSE(r.counterexamples.empty());
  const auto parsed = nlohmann::json::parse(r.counterexamples.front());
  EXPECT_TRUE(parsed.contains("pmf"));
  EXPECT_TRUE(parsed.contains("strategy"));
}

TEST(Mutations, EveryRegisteredCheckDetectsItsMutations) {
  for (const auto& check : registered_checks()) {
    ASSERT_FALSE(check.mutations.empty()) << check.name;
    EXPECT_TRUE(check.run(small(2), Mutation::None).passed()) << check.name;
    for (Mutation m : check.mutations)
      EXPECT_FALSE(check.run(small(2), m).passed()) << check.name << " mutation " << static_cast<int>(m);
  }
}

TEST(Rho0Identity, UniformCounterexample) {
  const auto u = as_joint(make_pmf({1.0, 1.0}));
  const double log_moment = q_log_moment(optimal_strategy(u, 1.0), u, 1.0);
  EXPECT_NEAR(log_moment, 0.5 * std::log(2.0), 1e-15);
  EXPECT_NEAR(clne_diag(u, 1.0), std::log(2.0), 1e-15);
  EXPECT_FALSE(check_rho0_identity(small(2)).passed());
  EXPECT_TRUE(check_rho0_sandwich(small(2)).passed());
}

TEST(Summary, Shape) {
  const auto s = run_sweep(small(2)).summary();
  EXPECT_EQ(s["failures"], 0);
  EXPECT_EQ(s["checks"].size(), registered_checks().size());
}

}  // namespace
}  // namespace qguess::harness
