// Acceptance run: one line per criterion. `acceptance N` runs criterion N only.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "qguess/harness.hpp"

namespace {

using namespace qguess::harness;

struct Part {
  std::function<CheckResult(const SweepConfig&, Mutation)> run;
  std::vector<Mutation> mutations;
};

struct Criterion {
  int id;
  std::string title;
  SweepConfig config;
  std::vector<Part> parts;
};

SweepConfig base(int trials) {
  SweepConfig c;
  c.trials = trials;
  return c;
}

SweepConfig positive_q(int trials) {
  SweepConfig c = base(trials);
  c.q_grid = {0.5, 1.0, 2.0};
  return c;
}

std::vector<Criterion> criteria() {
  SweepConfig divergence = base(1000);
  divergence.q_grid = {0.5, 2.0};
  SweepConfig mismatch = positive_q(500);
  mismatch.rho_grid = {0.5, 1.0, 2.0};
  SweepConfig minimax = positive_q(50);
  minimax.alphabet_sizes = {2, 3, 4};

  return {
      {1, "lower bound, any strategy", base(1000), {{check_theorem1, {Mutation::BoundL}}}},
      {2, "conditional lower bound", base(1000), {{check_theorem2, {Mutation::BoundL}}}},
      {3, "optimal moment sandwich", base(1000), {{check_theorem3, {Mutation::BoundL, Mutation::QMoment}}}},
      {4, "optimality vs exhaustive search", base(200), {{check_optimality_oracle, {Mutation::QMoment}}}},
      {5, "q=1 reduction to Renyi", base(200), {{check_classical_reduction, {Mutation::BoundL, Mutation::Renyi}}}},
      {6, "log-norm entropy identities", positive_q(500), {{check_lne_identities, {Mutation::BoundL, Mutation::Lne, Mutation::Clne}}}},
      {7, "diagonal limits", positive_q(100), {{check_diagonal_limits, {Mutation::LneDiag, Mutation::ClneDiag}}}},
      {8,
       "rho -> 0 log-moment identity and minimality",
       positive_q(100),
       {{check_rho0_identity, {Mutation::QLogMoment, Mutation::ClneDiag}}, {check_rho0_minimality, {Mutation::QLogMoment}},
        {check_rho0_sandwich, {Mutation::QLogMoment, Mutation::ClneDiag}}}},
      {9, "relative (alpha,beta)-entropy properties", divergence, {{check_divergence, {Mutation::RelativeAB, Mutation::RelativeABCond}}}},
      {10, "mismatched sandwich", mismatch, {{check_mismatch_sandwich, {Mutation::BoundLStar, Mutation::QMoment}}}},
      {11,
       "redundancy vs relative entropy",
       positive_q(500),
       {{check_mismatch3, {Mutation::Redundancy, Mutation::RelativeABCond, Mutation::BoundLStar}}}},
      {12, "minimax redundancy", minimax, {{check_minimax, {Mutation::MinimaxValue, Mutation::WorstRedundancy}}}},
  };
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool run_criterion(const Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::size_t evaluations = 0, failures = 0;
  double worst = 0.0;
  std::string first_dump;
  std::vector<std::string> sub;
  for (const auto& part : c.parts) {
    const auto r = part.run(c.config, Mutation::None);
    char line[256];
    std::snprintf(line, sizeof line, "    %-22s %s  evaluations=%zu failures=%zu worst=%.3g\n", r.name.c_str(),
                  r.passed() ? "PASS" : "FAIL", r.evaluations, r.failures, r.worst);
    sub.push_back(line);
    ok = ok && r.passed();
    evaluations += r.evaluations;
    failures += r.failures;
    worst = std::max(worst, r.worst);
    if (first_dump.empty() && !r.counterexamples.empty()) first_dump = r.name + ": " + r.counterexamples.front();
  }
  std::printf("criterion %2d %s  %s  evaluations=%zu failures=%zu worst=%.3g (%.1fs)\n", c.id, ok ? "PASS" : "FAIL",
              c.title.c_str(), evaluations, failures, worst, seconds_since(t0));
  if (sub.size() > 1)
    for (const auto& l : sub) std::fputs(l.c_str(), stdout);
  if (!first_dump.empty()) std::printf("    first counterexample %s\n", first_dump.c_str());
  return ok;
}

// Every check of criteria 1-12 must fail under each of its mutations.
bool run_mutation_suite(const std::vector<Criterion>& all) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t runs = 0, caught = 0;
  for (const auto& c : all) {
    SweepConfig small = c.config;
    small.trials = std::min(small.trials, 3);
    for (const auto& part : c.parts)
      for (Mutation m : part.mutations) {
        ++runs;
        const auto r = part.run(small, m);
        if (!r.passed()) ++caught;
        else std::printf("    mutation %d not detected by %s\n", static_cast<int>(m), r.name.c_str());
      }
  }
  const bool ok = caught == runs;
  std::printf("criterion 13 %s  harness mutation suite  detected=%zu/%zu (%.1fs)\n", ok ? "PASS" : "FAIL", caught, runs,
              seconds_since(t0));
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  const auto all = criteria();
  bool ok = true;
  for (const auto& c : all)
    if (only == 0 || only == c.id) ok = run_criterion(c) && ok;
  if (only == 0 || only == 13) ok = run_mutation_suite(all) && ok;
  std::fflush(stdout);
  return ok ? 0 : 1;
}
