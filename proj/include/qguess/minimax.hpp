#ifndef QGUESS_MINIMAX_HPP
#define QGUESS_MINIMAX_HPP

#include <cstdint>
#include <vector>

#include "qguess/bounds.hpp"
#include "qguess/pmf.hpp"
#include "qguess/strategy.hpp"

namespace qguess {

/// Finite uncertainty family of joint pmfs over a common X x Y.
class SourceFamily {
 public:
  explicit SourceFamily(std::vector<JointPmf> members);

  const std::vector<JointPmf>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const JointPmf& front() const { return members_.front(); }

  /// Entry-wise average of the members.
  JointPmf barycenter() const;

 private:
  std::vector<JointPmf> members_;
};

struct SolverConfig {
  int restarts = 8;
  double tol = 1e-9;
  long max_iterations = 100000;
  std::uint64_t seed = 0;
  double temperature_start = 10.0;
  double temperature_end = 1e-4;
};

struct MinimaxResult {
  JointPmf q_star;
  double c_value = 0.0;
  long iterations = 0;
  bool converged = false;
  double certificate_gap = 0.0;
};

/// sup over the family of R_q(P, G) (exact for a finite family).
double worst_redundancy(const SourceFamily& family, const GuessingStrategy& g, const NEParams& params);

/// F(Q) = max_P q * RE_{(q/(1+rho), q)}(P, Q).
double minimax_objective(const SourceFamily& family, const JointPmf& q_ref, const NEParams& params);

/// Minimizes F over the interior of the joint simplex. Requires q > 0.
///
/// Multiplicative-weights descent on log Q with central-difference gradients of a
/// log-sum-exp smoothed max, annealed from temperature_start to temperature_end,
/// restarted from Dirichlet(1) seeds and from the family barycenter. The best
/// restart wins (ties go to the lower restart index). Non-convergence is reported
/// through `converged`, never thrown.
MinimaxResult solve_minimax(const SourceFamily& family, const NEParams& params, const SolverConfig& config = {});

struct RobustResult {
  GuessingStrategy strategy;
  BoundReport report;            // moment = worst redundancy of the robust strategy
  MinimaxResult minimax;
  double best_worst_redundancy;  // min over the checked strategies
  std::size_t strategies_checked;
  bool exhaustive;
};

/// Maximum strategy-space size for which robust_strategy enumerates every strategy.
inline constexpr std::uint64_t kRobustEnumerationBudget = 10000;

/// G~* = G*_{Q*} and the two-sided guarantee
///   sup_P R_q(P, G) >= C - ln(1+ln|X|) for every checked G,
///   sup_P R_q(P, G~*) <= C + ln(1+ln|X|).
RobustResult robust_strategy(const SourceFamily& family, const NEParams& params, const SolverConfig& config = {});

}  // namespace qguess

#endif  // QGUESS_MINIMAX_HPP
