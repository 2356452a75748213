#ifndef QGUESS_HARNESS_HPP
#define QGUESS_HARNESS_HPP

// Independent oracles and seeded property sweeps over every bound and identity.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qguess/bounds.hpp"
#include "qguess/minimax.hpp"
#include "qguess/pmf.hpp"
#include "qguess/strategy.hpp"

namespace qguess::harness {

struct SweepConfig {
  std::uint64_t seed = 20240611;
  int trials = 1000;
  std::vector<int> alphabet_sizes{2, 3, 4, 5, 6, 7, 8};
  std::vector<int> y_sizes{2, 3};
  std::vector<double> q_grid{-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
  std::vector<double> rho_grid{0.25, 0.5, 1.0, 2.0, 4.0};
  double tolerance = 1e-10;

  /// Throws InvalidConfig when trials < 1, a grid is empty, or tolerance <= 0.
  void validate() const;
};

SweepConfig sweep_config_from_json(const nlohmann::json& j);

/// Formula whose value is shifted by kMutationDelta inside a check.
enum class Mutation {
  None,
  BoundL,
  QMoment,
  Renyi,
  Lne,
  Clne,
  LneDiag,
  ClneDiag,
  QLogMoment,
  RelativeAB,
  RelativeABCond,
  BoundLStar,
  Redundancy,
  MinimaxValue,
  WorstRedundancy,
};

inline constexpr double kMutationDelta = 1e-3;

struct CsvRow {
  BoundReport report;
  std::uint64_t seed = 0;
};

/// theorem_id,q,rho,alphabet_x,alphabet_y,seed,moment,lower,upper,slack_lower,slack_upper,violated
void write_csv_header(std::ostream& out);
/// One row, numbers at 17 significant digits.
void write_csv_row(std::ostream& out, const CsvRow& row);

struct CheckResult {
  std::string name;
  std::size_t evaluations = 0;
  std::size_t failures = 0;
  double worst = 0.0;  // largest violation magnitude observed
  std::vector<std::string> counterexamples;
  std::vector<CsvRow> rows;

  bool passed() const { return failures == 0; }
};

struct SweepReport {
  std::vector<CheckResult> checks;

  std::size_t failures() const;
  void write_csv(std::ostream& out) const;
  nlohmann::json summary() const;
};

/// Exhaustive minimizer of E_q[G^rho] over every per-y permutation, evaluated by
/// naive linear-space sums. Ties go to the lexicographically smallest rank table.
std::pair<GuessingStrategy, double> brute_force_optimal(const JointPmf& j, const NEParams& params,
                                                        std::uint64_t budget = 1000000);

/// Same search for the cost ln G (the rho -> 0 criterion E_q[ln G]).
std::pair<GuessingStrategy, double> brute_force_log_optimal(const JointPmf& j, double q,
                                                            std::uint64_t budget = 1000000);

/// Grid search of max_P q RE(P, Q) over the interior of the joint simplex
/// (dimension |X||Y| - 1 <= 3). Dense when the grid is small enough, otherwise
/// a dense coarse grid followed by local grids around the best cells, shrinking
/// until the spacing reaches `step`.
double grid_minimax(const SourceFamily& family, const NEParams& params, double step);

// Individual checks. Each returns its pass/fail tally for the given config.
CheckResult check_theorem1(const SweepConfig& config, Mutation mutation = Mutation::None);
CheckResult check_theorem2(const SweepConfig& config, Mutation mutation = Mutation::None);
CheckResult check_theorem3(const SweepConfig& config, Mutation mutation = Mutation::None);
CheckResult check_optimality_oracle(const SweepConfig& config, Mutation mutation = Mutation::None);
CheckResult check_classical_reduction(const SweepConfig& config, Mutation mutation = Mutation::None);
CheckResult check_lne_identities(const SweepConfig& config, Mutation mutation = Mutation::None);
CheckResult check_diagonal_limits(const SweepConfig& config, Mutation mutation = Mutation::None);
CheckResult check_rho0_identity(const SweepConfig& config, Mutation mutation = Mutation::None);
CheckResult check_rho0_minimality(const SweepConfig& config, Mutation mutation = Mutation::None);
CheckResult check_rho0_sandwich(const SweepConfig& config, Mutation mutation = Mutation::None);
CheckResult check_divergence(const SweepConfig& config, Mutation mutation = Mutation::None);
CheckResult check_mismatch_sandwich(const SweepConfig& config, Mutation mutation = Mutation::None);
CheckResult check_mismatch3(const SweepConfig& config, Mutation mutation = Mutation::None);
CheckResult check_minimax(const SweepConfig& config, Mutation mutation = Mutation::None);

struct RegisteredCheck {
  std::string name;
  std::function<CheckResult(const SweepConfig&, Mutation)> run;
  std::vector<Mutation> mutations;  // each must make the check fail
};

/// Every check run_sweep executes, with its designated mutations.
const std::vector<RegisteredCheck>& registered_checks();

/// Runs every registered check. Deterministic in the config.
SweepReport run_sweep(const SweepConfig& config);

}  // namespace qguess::harness

#endif  // QGUESS_HARNESS_HPP
