#include "qguess/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "qguess/entropy.hpp"
#include "qguess/io.hpp"
#include "qguess/rng.hpp"

namespace qguess::harness {

using nlohmann::json;

void SweepConfig::validate() const {
  if (trials < 1) fail(ErrorCode::InvalidConfig, "trials must be >= 1");
  if (alphabet_sizes.empty() || y_sizes.empty() || q_grid.empty() || rho_grid.empty())
    fail(ErrorCode::InvalidConfig, "grids must be non-empty");
  if (!(tolerance > 0.0)) fail(ErrorCode::InvalidConfig, "tolerance must be > 0");
  for (int m : alphabet_sizes)
    if (m < 1) fail(ErrorCode::InvalidConfig, "alphabet sizes must be >= 1");
  for (int k : y_sizes)
    if (k < 1) fail(ErrorCode::InvalidConfig, "y sizes must be >= 1");
  for (double r : rho_grid)
    if (!(r > 0.0)) fail(ErrorCode::InvalidConfig, "rho grid must be positive");
}

SweepConfig sweep_config_from_json(const json& j) {
  SweepConfig c;
  if (!j.is_object()) fail(ErrorCode::ParseError, "sweep config must be an object");
  try {
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("trials")) c.trials = j.at("trials").get<int>();
    if (j.contains("alphabet_sizes")) c.alphabet_sizes = j.at("alphabet_sizes").get<std::vector<int>>();
    if (j.contains("y_sizes")) c.y_sizes = j.at("y_sizes").get<std::vector<int>>();
    if (j.contains("q_grid")) c.q_grid = j.at("q_grid").get<std::vector<double>>();
    if (j.contains("rho_grid")) c.rho_grid = j.at("rho_grid").get<std::vector<double>>();
    if (j.contains("tolerance")) c.tolerance = j.at("tolerance").get<double>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
  c.validate();
  return c;
}

std::size_t SweepReport::failures() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.failures;
  return n;
}

void write_csv_header(std::ostream& out) {
  out << "theorem_id,q,rho,alphabet_x,alphabet_y,seed,moment,lower,upper,slack_lower,slack_upper,violated\n";
}

void write_csv_row(std::ostream& out, const CsvRow& row) {
  std::ostringstream line;
  line << std::setprecision(17);
  const auto& r = row.report;
  line << theorem_name(r.theorem_id) << ',' << r.params.q << ',' << r.params.rho << ',' << r.alphabet_x << ','
       << r.alphabet_y << ',' << row.seed << ',' << r.moment << ',' << r.lower << ',' << r.upper << ','
       << r.slack_lower << ',' << r.slack_upper << ',' << (r.violated ? 1 : 0) << '\n';
  out << line.str();
}

void SweepReport::write_csv(std::ostream& out) const {
  write_csv_header(out);
  for (const auto& c : checks)
    for (const auto& row : c.rows) write_csv_row(out, row);
}

json SweepReport::summary() const {
  json j;
  j["failures"] = failures();
  json list = json::array();
  for (const auto& c : checks) {
    json e;
    e["name"] = c.name;
    e["evaluations"] = c.evaluations;
    e["failures"] = c.failures;
    e["worst"] = c.worst;
    e["counterexamples"] = c.counterexamples;
    list.push_back(e);
  }
  j["checks"] = list;
  return j;
}

namespace {

constexpr std::size_t kMaxDumps = 20;

class Tally {
 public:
  explicit Tally(std::string name) { result_.name = std::move(name); }

  /// Records one evaluation; `violation` > 0 means failure by that amount.
  template <typename Dump>
  void expect(bool ok, double violation, Dump&& dump) {
    ++result_.evaluations;
    if (ok) return;
    ++result_.failures;
    if (std::isfinite(violation)) result_.worst = std::max(result_.worst, violation);
    else result_.worst = std::numeric_limits<double>::infinity();
    if (result_.counterexamples.size() < kMaxDumps) result_.counterexamples.push_back(dump().dump());
  }

  template <typename Dump>
  void report(const BoundReport& r, std::uint64_t seed, Dump&& dump) {
    result_.rows.push_back({r, seed});
    const double deficit = std::max(-r.slack_lower, -r.slack_upper);
    expect(!r.violated, deficit, [&] {
      json j = dump();
      j["theorem"] = std::string(theorem_name(r.theorem_id));
      j["moment"] = r.moment;
      j["lower"] = r.lower;
      j["upper"] = r.upper;
      return j;
    });
  }

  CheckResult take() { return std::move(result_); }

 private:
  CheckResult result_;
};

double shift(double value, Mutation active, Mutation target) {
  return active == target ? value + kMutationDelta : value;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::uint64_t tag_of(const char* s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (; *s; ++s) h = (h ^ static_cast<unsigned char>(*s)) * 1099511628211ULL;
  return h;
}

struct Instance {
  std::uint64_t seed;
  CounterRng rng;
};

Instance instance(const SweepConfig& c, const char* tag, int trial) {
  const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(trial);
  return {seed, CounterRng({seed, tag_of(tag)})};
}

int pick(const std::vector<int>& v, int i) { return v[static_cast<std::size_t>(i) % v.size()]; }

std::vector<double> positive(const std::vector<double>& grid) {
  std::vector<double> out;
  for (double v : grid)
    if (v > 0.0) out.push_back(v);
  return out;
}

std::vector<double> nonzero(const std::vector<double>& grid) {
  std::vector<double> out;
  for (double v : grid)
    if (v != 0.0) out.push_back(v);
  return out;
}

std::vector<int> with_one(const std::vector<int>& sizes) {
  std::vector<int> out{1};
  for (int k : sizes)
    if (k != 1) out.push_back(k);
  return out;
}

std::vector<int> at_most(const std::vector<int>& sizes, int cap) {
  std::vector<int> out;
  for (int k : sizes)
    if (k <= cap) out.push_back(k);
  if (out.empty()) out.push_back(std::min(cap, 2));
  return out;
}

/// Degenerate single-symbol source: every bound in the suite is tight there.
JointPmf anchor_joint(int y_size) {
  Matrix<double> w(y_size, 1);
  for (int y = 0; y < y_size; ++y) w(y, 0) = 1.0 + y;
  return make_joint<double>(w);
}

Pmf anchor_pmf() { return make_pmf<double>({1.0}); }

json dump_pmf(const Pmf& p) { return io::to_json(p); }
json dump_joint(const JointPmf& j) { return io::to_json(j); }

json dump_params(const NEParams& p) { return json{{"q", p.q}, {"rho", p.rho}}; }

double harmonic_factor(Eigen::Index m, double rho) { return std::pow(1.0 + std::log(static_cast<double>(m)), -rho); }

// Shifts the bound-formula outputs of a sandwich report.
void mutate_bound(BoundReport& r, Mutation active, Mutation target) {
  if (active != target) return;
  const double h = harmonic_factor(r.alphabet_x, r.params.rho);
  if (std::isfinite(r.lower)) r.lower += h * kMutationDelta;
  if (std::isfinite(r.upper)) r.upper += kMutationDelta;
  r.finalize();
}

void mutate_moment(BoundReport& r, Mutation active, Mutation target) {
  if (active != target) return;
  r.moment += kMutationDelta;
  r.finalize();
}

// ---------------------------------------------------------------------------
// Exhaustive oracles

template <typename Cost>
std::pair<GuessingStrategy, double> brute_force(const JointPmf& j, double q, std::uint64_t budget, Cost cost) {
  const Eigen::Index m = j.x_size();
  const Eigen::Index k = j.y_size();
  if (strategy_count(m, k, budget) > budget) fail(ErrorCode::BudgetExceeded, "strategy space exceeds budget");
  const auto perms = rank_permutations(static_cast<int>(m));

  // Plain linear-space weights P(x,y)^q, independent of the library's log-space path.
  double denominator = 0.0;
  Matrix<double> w(k, m);
  for (Eigen::Index y = 0; y < k; ++y)
    for (Eigen::Index x = 0; x < m; ++x) {
      w(y, x) = std::pow(j.probs()(y, x), q);
      denominator += w(y, x);
    }
  std::vector<std::vector<double>> row_cost(static_cast<std::size_t>(k), std::vector<double>(perms.size()));
  for (Eigen::Index y = 0; y < k; ++y)
    for (std::size_t p = 0; p < perms.size(); ++p) {
      double s = 0.0;
      for (Eigen::Index x = 0; x < m; ++x) s += w(y, x) * cost(perms[p][static_cast<std::size_t>(x)]);
      row_cost[static_cast<std::size_t>(y)][p] = s;
    }

  std::vector<std::size_t> digit(static_cast<std::size_t>(k), 0);
  std::vector<std::size_t> best_digit = digit;
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    double total = 0.0;
    for (std::size_t y = 0; y < digit.size(); ++y) total += row_cost[y][digit[y]];
    if (total < best) {
      best = total;
      best_digit = digit;
    }
    Eigen::Index pos = k - 1;
    while (pos >= 0 && ++digit[static_cast<std::size_t>(pos)] == perms.size()) {
      digit[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  RankMatrix ranks(k, m);
  for (Eigen::Index y = 0; y < k; ++y)
    for (Eigen::Index x = 0; x < m; ++x)
      ranks(y, x) = perms[best_digit[static_cast<std::size_t>(y)]][static_cast<std::size_t>(x)];
  return {GuessingStrategy(j.x_labels(), j.y_labels(), std::move(ranks)), best / denominator};
}

bool distinct_rows(const JointPmf& j) {
  for (Eigen::Index y = 0; y < j.y_size(); ++y)
    for (Eigen::Index a = 0; a < j.x_size(); ++a)
      for (Eigen::Index b = a + 1; b < j.x_size(); ++b)
        if (j.log_probs()(y, a) == j.log_probs()(y, b)) return false;
  return true;
}

}  // namespace

std::pair<GuessingStrategy, double> brute_force_optimal(const JointPmf& j, const NEParams& params,
                                                        std::uint64_t budget) {
  const double rho = params.rho;
  return brute_force(j, params.q, budget, [rho](int r) { return std::pow(static_cast<double>(r), rho); });
}

std::pair<GuessingStrategy, double> brute_force_log_optimal(const JointPmf& j, double q, std::uint64_t budget) {
  return brute_force(j, q, budget, [](int r) { return std::log(static_cast<double>(r)); });
}

// ---------------------------------------------------------------------------
// Grid oracle for the minimax value

namespace {

class GridObjective {
 public:
  GridObjective(const SourceFamily& family, const NEParams& params) : family_(family), params_(params) {}

  double operator()(const std::vector<double>& point) const {
    const auto& f = family_.front();
    Matrix<double> w(f.y_size(), f.x_size());
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = point[static_cast<std::size_t>(i)];
    return minimax_objective(family_, validate_joint<double>(f.x_labels(), f.y_labels(), w), params_);
  }

 private:
  const SourceFamily& family_;
  NEParams params_;
};

// Visits compositions of `total` into `parts` positive integers.
template <typename Fn>
void for_each_composition(int total, int parts, std::vector<int>& current, Fn&& fn) {
  if (parts == 1) {
    current.push_back(total);
    fn(current);
    current.pop_back();
    return;
  }
  for (int first = 1; first <= total - (parts - 1); ++first) {
    current.push_back(first);
    for_each_composition(total - first, parts - 1, current, fn);
    current.pop_back();
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct Candidate {
  double value;
  std::vector<double> point;
};

void keep_best(std::vector<Candidate>& pool, Candidate c, std::size_t capacity) {
  for (const auto& e : pool)
    if (e.point == c.point) return;
  pool.push_back(std::move(c));
  std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
  if (pool.size() > capacity) pool.pop_back();
}

}  // namespace

double grid_minimax(const SourceFamily& family, const NEParams& params, double step) {
  if (!(params.q > 0.0)) fail(ErrorCode::NonPositiveQ);
  if (!(step > 0.0) || step >= 1.0) fail(ErrorCode::InvalidConfig, "grid step must be in (0, 1)");
  const int n = static_cast<int>(family.front().x_size() * family.front().y_size());
  if (n - 1 > 3) fail(ErrorCode::DimensionTooLarge, "grid oracle supports simplex dimension <= 3");
  const GridObjective objective(family, params);
  if (n == 1) return objective({1.0});

  constexpr double kDenseLimit = 2e6;
  constexpr std::size_t kKeep = 6;
  const int fine = static_cast<int>(std::lround(1.0 / step));
  const bool dense = binomial(fine - 1, n - 1) <= kDenseLimit;
  const int coarse = dense ? fine : 50;

  std::vector<Candidate> pool;
  std::vector<int> scratch;
  for_each_composition(coarse, n, scratch, [&](const std::vector<int>& c) {
    std::vector<double> point(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) point[i] = static_cast<double>(c[i]) / coarse;
    keep_best(pool, {objective(point), std::move(point)}, kKeep);
  });
  if (dense) return pool.front().value;

  // Local grids: 11 points per free axis around each kept point, spacing / 5 per level.
  double spacing = 1.0 / coarse;
  while (spacing > step) {
    spacing /= 5.0;
    const auto centers = pool;
    for (const auto& center : centers) {
      std::vector<int> offset(static_cast<std::size_t>(n - 1), -5);
      while (true) {
        std::vector<double> point(static_cast<std::size_t>(n));
        double rest = 1.0;
        bool inside = true;
        for (int i = 0; i < n - 1; ++i) {
          point[static_cast<std::size_t>(i)] = center.point[static_cast<std::size_t>(i)] + spacing * offset[static_cast<std::size_t>(i)];
          if (point[static_cast<std::size_t>(i)] <= 0.0) inside = false;
          rest -= point[static_cast<std::size_t>(i)];
        }
        point[static_cast<std::size_t>(n - 1)] = rest;
        if (rest <= 0.0) inside = false;
        if (inside) keep_best(pool, {objective(point), point}, kKeep);
        int pos = n - 2;
        while (pos >= 0 && ++offset[static_cast<std::size_t>(pos)] > 5) {
          offset[static_cast<std::size_t>(pos)] = -5;
          --pos;
        }
        if (pos < 0) break;
      }
    }
  }
  return pool.front().value;
}

// ---------------------------------------------------------------------------
// Checks

CheckResult check_theorem1(const SweepConfig& config, Mutation mutation) {
  config.validate();
  Tally tally("theorem1_lower_bound");
  const auto run = [&](const Pmf& p, std::uint64_t seed, CounterRng& rng) {
    for (double q : config.q_grid)
      for (double rho : config.rho_grid) {
        const NEParams params(q, rho);
        const auto best = optimal_strategy(p, q);
        const auto labels_y = Labels{"_"};
        for (const auto& g : {best, random_strategy(rng, p.labels(), labels_y), reversed(best)}) {
          auto r = qguess::check_theorem1(p, g, params);
          mutate_bound(r, mutation, Mutation::BoundL);
          mutate_moment(r, mutation, Mutation::QMoment);
          tally.report(r, seed, [&] { return json{{"pmf", dump_pmf(p)}, {"params", dump_params(params)}, {"strategy", io::to_json(g)}}; });
        }
      }
  };
  for (int t = 0; t < config.trials; ++t) {
    auto inst = instance(config, "theorem1", t);
    run(random_pmf(inst.rng, pick(config.alphabet_sizes, t)), inst.seed, inst.rng);
  }
  CounterRng anchor_rng({config.seed, tag_of("anchor")});
  run(anchor_pmf(), config.seed, anchor_rng);
  return tally.take();
}

CheckResult check_theorem2(const SweepConfig& config, Mutation mutation) {
  config.validate();
  Tally tally("theorem2_conditional_lower_bound");
  const auto run = [&](const JointPmf& j, std::uint64_t seed, CounterRng& rng) {
    for (double q : config.q_grid)
      for (double rho : config.rho_grid) {
        const NEParams params(q, rho);
        const auto best = optimal_strategy(j, q);
        for (const auto& g : {best, random_strategy(rng, j.x_labels(), j.y_labels()), reversed(best)}) {
          auto r = qguess::check_theorem2(j, g, params);
          mutate_bound(r, mutation, Mutation::BoundL);
          mutate_moment(r, mutation, Mutation::QMoment);
          tally.report(r, seed, [&] { return json{{"joint", dump_joint(j)}, {"params", dump_params(params)}, {"strategy", io::to_json(g)}}; });
        }
      }
  };
  const int na = static_cast<int>(config.alphabet_sizes.size());
  for (int t = 0; t < config.trials; ++t) {
    auto inst = instance(config, "theorem2", t);
    run(random_joint(inst.rng, pick(config.alphabet_sizes, t), pick(config.y_sizes, t / na)), inst.seed, inst.rng);
  }
  CounterRng anchor_rng({config.seed, tag_of("anchor")});
  run(anchor_joint(pick(config.y_sizes, 0)), config.seed, anchor_rng);
  return tally.take();
}

CheckResult check_theorem3(const SweepConfig& config, Mutation mutation) {
  config.validate();
  Tally tally("theorem3_sandwich");
  const auto ys = with_one(config.y_sizes);
  const auto run = [&](const JointPmf& j, std::uint64_t seed) {
    for (double q : config.q_grid)
      for (double rho : config.rho_grid) {
        const NEParams params(q, rho);
        auto r = qguess::check_theorem3(j, params);
        mutate_bound(r, mutation, Mutation::BoundL);
        mutate_moment(r, mutation, Mutation::QMoment);
        tally.report(r, seed, [&] { return json{{"joint", dump_joint(j)}, {"params", dump_params(params)}}; });
      }
  };
  const int na = static_cast<int>(config.alphabet_sizes.size());
  for (int t = 0; t < config.trials; ++t) {
    auto inst = instance(config, "theorem3", t);
    run(random_joint(inst.rng, pick(config.alphabet_sizes, t), pick(ys, t / na)), inst.seed);
  }
  run(anchor_joint(1), config.seed);
  return tally.take();
}

CheckResult check_optimality_oracle(const SweepConfig& config, Mutation mutation) {
  config.validate();
  Tally tally("optimality_oracle");
  const auto xs = at_most(config.alphabet_sizes, 6);
  const auto ys = at_most(with_one(config.y_sizes), 2);
  const int na = static_cast<int>(xs.size());
  for (int t = 0; t < config.trials; ++t) {
    auto inst = instance(config, "optimality", t);
    const auto j = random_joint(inst.rng, pick(xs, t), pick(ys, t / na));
    const bool unique = distinct_rows(j);
    for (double q : config.q_grid) {
      const auto best = optimal_strategy(j, q);
      for (double rho : config.rho_grid) {
        const NEParams params(q, rho);
        const double lib = shift(q_moment(best, j, params), mutation, Mutation::QMoment);
        const auto [oracle_g, oracle] = brute_force_optimal(j, params);
        const double gap = std::abs(lib - oracle) / oracle;
        const bool same = !unique || oracle_g == best;
        tally.expect(gap <= 1e-12 && same, gap, [&] {
          return json{{"joint", dump_joint(j)}, {"params", dump_params(params)}, {"library", lib}, {"oracle", oracle},
                      {"library_strategy", io::to_json(best)}, {"oracle_strategy", io::to_json(oracle_g)}};
        });
      }
    }
  }
  return tally.take();
}

CheckResult check_classical_reduction(const SweepConfig& config, Mutation mutation) {
  config.validate();
  Tally tally("classical_reduction");
  const auto run = [&](const Pmf& p) {
    const double slack = log_harmonic_slack(static_cast<int>(p.size()));
    for (double rho : config.rho_grid) {
      const NEParams params(1.0, rho);
      const double lhs = std::log(shift(bound_L(p, params), mutation, Mutation::BoundL));
      const double h = shift(renyi(p, 1.0 / (1.0 + rho)), mutation, Mutation::Renyi);
      const double rhs = rho * h;
      const auto dump = [&] { return json{{"pmf", dump_pmf(p)}, {"rho", rho}, {"ln_L", lhs}, {"rho_renyi", rhs}}; };
      tally.expect(close(lhs, rhs, config.tolerance), rel_gap(lhs, rhs), dump);
      // (1/rho) ln min_G E[G^rho] in [H - ln(1 + ln M), H]
      const double v =
          std::log(shift(q_moment(optimal_strategy(p, 1.0), p, params), mutation, Mutation::QMoment)) / rho;
      const double tol = config.tolerance * std::max(1.0, std::abs(h)) + kBoundAbsTol;
      const bool inside = v >= h - slack - tol && v <= h + tol;
      tally.expect(inside, std::max(h - slack - v, v - h), dump);
    }
  };
  for (int t = 0; t < config.trials; ++t) {
    auto inst = instance(config, "classical", t);
    run(random_pmf(inst.rng, pick(config.alphabet_sizes, t)));
  }
  run(anchor_pmf());
  return tally.take();
}

CheckResult check_lne_identities(const SweepConfig& config, Mutation mutation) {
  config.validate();
  Tally tally("lne_identities");
  const auto qs = positive(config.q_grid);
  const int na = static_cast<int>(config.alphabet_sizes.size());
  for (int t = 0; t < config.trials; ++t) {
    auto inst = instance(config, "lne", t);
    const auto p = random_pmf(inst.rng, pick(config.alphabet_sizes, t));
    const auto j = random_joint(inst.rng, pick(config.alphabet_sizes, t), pick(config.y_sizes, t / na));
    for (double q : qs)
      for (double rho : config.rho_grid) {
        const NEParams params(q, rho);
        const AlphaBeta ab(params.alpha(), q);
        const double lhs = std::log(shift(bound_L(p, params), mutation, Mutation::BoundL));
        const double rhs = rho * shift(lne(p, ab), mutation, Mutation::Lne);
        tally.expect(close(lhs, rhs, config.tolerance), rel_gap(lhs, rhs),
                     [&] { return json{{"pmf", dump_pmf(p)}, {"params", dump_params(params)}, {"ln_L", lhs}, {"rho_lne", rhs}}; });
        const double lhs_c = std::log(shift(bound_L_cond(j, params), mutation, Mutation::BoundL));
        const double rhs_c = rho * shift(clne(j, ab), mutation, Mutation::Clne);
        tally.expect(close(lhs_c, rhs_c, config.tolerance), rel_gap(lhs_c, rhs_c),
                     [&] { return json{{"joint", dump_joint(j)}, {"params", dump_params(params)}, {"ln_L", lhs_c}, {"rho_clne", rhs_c}}; });
      }
  }
  return tally.take();
}

CheckResult check_diagonal_limits(const SweepConfig& config, Mutation mutation) {
  config.validate();
  Tally tally("diagonal_limits");
  constexpr double kEps = 1e-6;
  constexpr double kTol = 1e-4;
  const auto alphas = positive(config.q_grid);
  const int na = static_cast<int>(config.alphabet_sizes.size());
  for (int t = 0; t < config.trials; ++t) {
    auto inst = instance(config, "diagonal", t);
    const auto p = random_pmf(inst.rng, pick(config.alphabet_sizes, t));
    const auto j = random_joint(inst.rng, pick(config.alphabet_sizes, t), pick(config.y_sizes, t / na));
    for (double a : alphas) {
      const double diag = shift(lne_diag(p, a), mutation, Mutation::LneDiag);
      const double diag_c = shift(clne_diag(j, a), mutation, Mutation::ClneDiag);
      for (double eps : {kEps, -kEps}) {
        const double off = lne(p, AlphaBeta(a, a + eps));
        tally.expect(std::abs(off - diag) < kTol, std::abs(off - diag),
                     [&] { return json{{"pmf", dump_pmf(p)}, {"alpha", a}, {"eps", eps}, {"lne", off}, {"lne_diag", diag}}; });
        const double off_c = clne(j, AlphaBeta(a, a + eps));
        tally.expect(std::abs(off_c - diag_c) < kTol, std::abs(off_c - diag_c),
                     [&] { return json{{"joint", dump_joint(j)}, {"alpha", a}, {"eps", eps}, {"clne", off_c}, {"clne_diag", diag_c}}; });
      }
    }
  }
  return tally.take();
}

CheckResult check_rho0_identity(const SweepConfig& config, Mutation mutation) {
  config.validate();
  Tally tally("rho0_identity");
  const auto qs = positive(config.q_grid);
  const auto ys = with_one(config.y_sizes);
  const int na = static_cast<int>(config.alphabet_sizes.size());
  for (int t = 0; t < config.trials; ++t) {
    auto inst = instance(config, "rho0", t);
    const auto j = random_joint(inst.rng, pick(config.alphabet_sizes, t), pick(ys, t / na));
    for (double q : qs) {
      const double lhs = shift(q_log_moment(optimal_strategy(j, q), j, q), mutation, Mutation::QLogMoment);
      const double rhs = shift(clne_diag(j, q), mutation, Mutation::ClneDiag);
      tally.expect(std::abs(lhs - rhs) < 1e-9, std::abs(lhs - rhs),
                   [&] { return json{{"joint", dump_joint(j)}, {"q", q}, {"log_moment", lhs}, {"clne_diag", rhs}}; });
    }
  }
  return tally.take();
}

CheckResult check_rho0_minimality(const SweepConfig& config, Mutation mutation) {
  config.validate();
  Tally tally("rho0_minimality");
  const auto qs = positive(config.q_grid);
  const auto xs = at_most(config.alphabet_sizes, 5);
  const auto ys = at_most(with_one(config.y_sizes), 2);
  const int na = static_cast<int>(xs.size());
  for (int t = 0; t < config.trials; ++t) {
    auto inst = instance(config, "rho0min", t);
    const auto j = random_joint(inst.rng, pick(xs, t), pick(ys, t / na));
    for (double q : qs) {
      const double lib = shift(q_log_moment(optimal_strategy(j, q), j, q), mutation, Mutation::QLogMoment);
      const auto [g, oracle] = brute_force_log_optimal(j, q);
      tally.expect(std::abs(lib - oracle) <= 1e-12 * std::max(1.0, oracle), std::abs(lib - oracle),
                   [&] { return json{{"joint", dump_joint(j)}, {"q", q}, {"library", lib}, {"oracle", oracle}}; });
    }
  }
  return tally.take();
}

CheckResult check_rho0_sandwich(const SweepConfig& config, Mutation mutation) {
  config.validate();
  Tally tally("rho0_sandwich");
  const auto qs = positive(config.q_grid);
  const auto ys = with_one(config.y_sizes);
  const int na = static_cast<int>(config.alphabet_sizes.size());
  const auto run = [&](const JointPmf& j) {
    const double slack = log_harmonic_slack(static_cast<int>(j.x_size()));
    for (double q : qs) {
      const double v = shift(q_log_moment(optimal_strategy(j, q), j, q), mutation, Mutation::QLogMoment);
      const double e = shift(clne_diag(j, q), mutation, Mutation::ClneDiag);
      const double tol = config.tolerance * std::max(1.0, std::abs(e)) + kBoundAbsTol;
      tally.expect(v >= e - slack - tol && v <= e + tol, std::max(e - slack - v, v - e),
                   [&] { return json{{"joint", dump_joint(j)}, {"q", q}, {"log_moment", v}, {"clne_diag", e}}; });
    }
  };
  for (int t = 0; t < config.trials; ++t) {
    auto inst = instance(config, "rho0sandwich", t);
    run(random_joint(inst.rng, pick(config.alphabet_sizes, t), pick(ys, t / na)));
  }
  run(anchor_joint(1));
  return tally.take();
}

CheckResult check_divergence(const SweepConfig& config, Mutation mutation) {
  config.validate();
  Tally tally("divergence_properties");
  constexpr double kTol = 1e-10;
  const auto orders = positive(config.q_grid);
  const int na = static_cast<int>(config.alphabet_sizes.size());
  for (double a : orders)
    for (double b : orders) {
      if (a == b) continue;
      const AlphaBeta ab(a, b);
      for (int t = 0; t < config.trials; ++t) {
        auto inst = instance(config, "divergence", t);
        const int m = pick(config.alphabet_sizes, t);
        const auto p = random_pmf(inst.rng, m);
        const auto q = random_pmf(inst.rng, m);
        const auto pj = random_joint(inst.rng, m, pick(config.y_sizes, t / na));
        const auto qj = random_joint(inst.rng, m, pick(config.y_sizes, t / na));
        const auto dump = [&] {
          return json{{"p", dump_pmf(p)}, {"q", dump_pmf(q)}, {"pj", dump_joint(pj)}, {"qj", dump_joint(qj)}, {"alpha", a}, {"beta", b}};
        };
        const double d = shift(relative_ab(p, q, ab), mutation, Mutation::RelativeAB);
        const double d0 = shift(relative_ab(p, p, ab), mutation, Mutation::RelativeAB);
        const double dc = shift(relative_ab_cond(pj, qj, ab), mutation, Mutation::RelativeABCond);
        const double dc0 = shift(relative_ab_cond(pj, pj, ab), mutation, Mutation::RelativeABCond);
        const double d1 = shift(relative_ab_cond(as_joint(p), as_joint(q), ab), mutation, Mutation::RelativeABCond);
        tally.expect(d >= -kTol, -d, dump);
        tally.expect(dc >= -kTol, -dc, dump);
        tally.expect(std::abs(d0) <= kTol, std::abs(d0), dump);
        tally.expect(std::abs(dc0) <= kTol, std::abs(dc0), dump);
        tally.expect(std::abs(d1 - d) <= kTol, std::abs(d1 - d), dump);
        // zero only at P = Q: well-separated random pairs stay strictly positive
        if ((p.probs() - q.probs()).cwiseAbs().maxCoeff() > 1e-3) tally.expect(d > kTol, kTol - d, dump);
      }
    }
  return tally.take();
}

CheckResult check_mismatch_sandwich(const SweepConfig& config, Mutation mutation) {
  config.validate();
  Tally tally("mismatch_sandwich");
  const auto qs = nonzero(config.q_grid);
  const auto ys = with_one(config.y_sizes);
  const int na = static_cast<int>(config.alphabet_sizes.size());
  const auto run = [&](const JointPmf& p, const JointPmf& q_ref, std::uint64_t seed) {
    for (double q : qs)
      for (double rho : config.rho_grid) {
        const NEParams params(q, rho);
        const auto dump = [&] { return json{{"p", dump_joint(p)}, {"q_ref", dump_joint(q_ref)}, {"params", dump_params(params)}}; };
        auto r = qguess::check_mismatch_sandwich(p, q_ref, params);
        mutate_bound(r, mutation, Mutation::BoundLStar);
        mutate_moment(r, mutation, Mutation::QMoment);
        tally.report(r, seed, dump);

        // Q^(G) against its closed forms
        const auto g = mismatched_strategy(q_ref, q);
        const auto q_g = q_pmf_from_strategy(g, params);
        const double k = static_cast<double>(p.y_size());
        const double s_q = inverse_power_sum<double>(static_cast<int>(p.x_size()), (1.0 + rho) / q);
        const double s_1 = inverse_power_sum<double>(static_cast<int>(p.x_size()), 1.0 + rho);
        const double sum = q_g.probs().sum();
        tally.expect(std::abs(sum - 1.0) <= 1e-12, std::abs(sum - 1.0), dump);
        double worst = 0.0;
        for (Eigen::Index y = 0; y < p.y_size(); ++y) {
          const auto esc = escort(conditional_given_y(q_g, y), q);
          for (Eigen::Index x = 0; x < p.x_size(); ++x) {
            const double gr = g(y, x);
            const double joint_form = 1.0 / (k * s_q * std::pow(gr, (1.0 + rho) / q));
            const double escort_form = 1.0 / (s_1 * std::pow(gr, 1.0 + rho));
            worst = std::max(worst, std::abs(q_g(y, x) - joint_form) / joint_form);
            worst = std::max(worst, std::abs(esc[x] - escort_form) / escort_form);
          }
        }
        tally.expect(worst <= 1e-12, worst, dump);
      }
  };
  for (int t = 0; t < config.trials; ++t) {
    auto inst = instance(config, "mismatch", t);
    const int m = pick(config.alphabet_sizes, t);
    const int k = pick(ys, t / na);
    const auto p = random_joint(inst.rng, m, k);
    run(p, random_joint(inst.rng, m, k), inst.seed);
  }
  run(anchor_joint(1), anchor_joint(1), config.seed);
  return tally.take();
}

CheckResult check_mismatch3(const SweepConfig& config, Mutation mutation) {
  config.validate();
  Tally tally("mismatch3_redundancy");
  const auto qs = positive(config.q_grid);
  const auto ys = with_one(config.y_sizes);
  const int na = static_cast<int>(config.alphabet_sizes.size());
  const auto run = [&](const JointPmf& p, const GuessingStrategy& g, std::uint64_t seed) {
    for (double q : qs)
      for (double rho : config.rho_grid) {
        const NEParams params(q, rho);
        const auto dump = [&] { return json{{"p", dump_joint(p)}, {"strategy", io::to_json(g)}, {"params", dump_params(params)}}; };
        auto r = qguess::check_mismatch3(p, g, params);
        if (mutation == Mutation::Redundancy) {
          r.moment += kMutationDelta;
          r.finalize();
        }
        if (mutation == Mutation::RelativeABCond) {
          r.lower += q * kMutationDelta;
          r.upper += q * kMutationDelta;
          r.finalize();
        }
        tally.report(r, seed, dump);

        // q RE(P, Q) = (1/rho) ln L*(P, Q) - CLNE(P) with Q = Q^(G)
        const auto q_g = q_pmf_from_strategy(g, params);
        const AlphaBeta ab(params.alpha(), q);
        const double lhs = q * shift(relative_ab_cond(p, q_g, ab), mutation, Mutation::RelativeABCond);
        const double rhs = std::log(shift(bound_L_star(p, q_g, params), mutation, Mutation::BoundLStar)) / rho -
                           shift(clne(p, ab), mutation, Mutation::Clne);
        tally.expect(close(lhs, rhs, 1e-9), rel_gap(lhs, rhs), dump);
      }
  };
  for (int t = 0; t < config.trials; ++t) {
    auto inst = instance(config, "mismatch3", t);
    const auto p = random_joint(inst.rng, pick(config.alphabet_sizes, t), pick(ys, t / na));
    run(p, random_strategy(inst.rng, p.x_labels(), p.y_labels()), inst.seed);
  }
  const auto a = anchor_joint(1);
  run(a, identity_strategy(a.x_labels(), a.y_labels()), config.seed);
  return tally.take();
}

CheckResult check_minimax(const SweepConfig& config, Mutation mutation) {
  config.validate();
  Tally tally("minimax_robust");
  constexpr double kGridTol = 1e-3;
  constexpr double kGridStep = 1e-4;
  const auto qs = positive(config.q_grid);
  if (qs.empty()) fail(ErrorCode::InvalidConfig, "minimax check needs a positive q");
  std::vector<int> xs;
  for (int m : config.alphabet_sizes)
    if (m >= 2 && m <= 4) xs.push_back(m);
  if (xs.empty()) xs = {2, 3, 4};

  const auto run = [&](const SourceFamily& family, const NEParams& params, std::uint64_t seed) {
    SolverConfig solver;
    solver.seed = seed;
    const auto robust = robust_strategy(family, params, solver);
    const double c = shift(robust.minimax.c_value, mutation, Mutation::MinimaxValue);
    const double grid = grid_minimax(family, params, kGridStep);
    const double slack = log_harmonic_slack(static_cast<int>(family.front().x_size()));
    const auto dump = [&] {
      json members = json::array();
      for (const auto& m : family.members()) members.push_back(dump_joint(m));
      return json{{"members", members}, {"params", dump_params(params)}, {"c_value", c}, {"grid", grid},
                  {"robust", io::to_json(robust.strategy)}};
    };
    tally.expect(std::abs(c - grid) <= kGridTol, std::abs(c - grid), dump);

    BoundReport r = robust.report;
    r.moment = shift(r.moment, mutation, Mutation::WorstRedundancy);
    r.lower = c - slack;
    r.upper = c + slack;
    r.finalize();
    tally.report(r, seed, dump);
    const double best = shift(robust.best_worst_redundancy, mutation, Mutation::WorstRedundancy);
    const double tol = kBoundRelTol * std::abs(r.lower) + kBoundAbsTol;
    tally.expect(best >= r.lower - tol, r.lower - best, dump);
  };

  const int nx = static_cast<int>(xs.size());
  const int nq = static_cast<int>(qs.size());
  for (int t = 0; t < config.trials; ++t) {
    auto inst = instance(config, "minimax", t);
    const int m = pick(xs, t);
    const int size = 1 + (t / nx) % 3;
    std::vector<JointPmf> members;
    for (int i = 0; i < size; ++i) members.push_back(as_joint(random_pmf(inst.rng, m)));
    const NEParams params(qs[static_cast<std::size_t>((t / (nx * 3)) % nq)],
                          config.rho_grid[static_cast<std::size_t>(t / (nx * 3 * nq)) % config.rho_grid.size()]);
    run(SourceFamily(std::move(members)), params, inst.seed);
  }
  const NEParams anchor_params(qs.front(), config.rho_grid.front());
  run(SourceFamily({as_joint(anchor_pmf()), as_joint(anchor_pmf())}), anchor_params, config.seed);
  return tally.take();
}

const std::vector<RegisteredCheck>& registered_checks() {
  static const std::vector<RegisteredCheck> checks = {
      {"theorem1_lower_bound", check_theorem1, {Mutation::BoundL}},
      {"theorem2_conditional_lower_bound", check_theorem2, {Mutation::BoundL}},
      {"theorem3_sandwich", check_theorem3, {Mutation::BoundL, Mutation::QMoment}},
      {"optimality_oracle", check_optimality_oracle, {Mutation::QMoment}},
      {"classical_reduction", check_classical_reduction, {Mutation::BoundL, Mutation::Renyi}},
      {"lne_identities", check_lne_identities, {Mutation::BoundL, Mutation::Lne, Mutation::Clne}},
      {"diagonal_limits", check_diagonal_limits, {Mutation::LneDiag, Mutation::ClneDiag}},
      {"rho0_minimality", check_rho0_minimality, {Mutation::QLogMoment}},
      {"rho0_sandwich", check_rho0_sandwich, {Mutation::QLogMoment, Mutation::ClneDiag}},
      {"divergence_properties", check_divergence, {Mutation::RelativeAB, Mutation::RelativeABCond}},
      {"mismatch_sandwich", check_mismatch_sandwich, {Mutation::BoundLStar, Mutation::QMoment}},
      {"mismatch3_redundancy", check_mismatch3, {Mutation::Redundancy, Mutation::RelativeABCond, Mutation::BoundLStar}},
      {"minimax_robust", check_minimax, {Mutation::MinimaxValue, Mutation::WorstRedundancy}},
  };
  return checks;
}

SweepReport run_sweep(const SweepConfig& config) {
  config.validate();
  // Exhaustive and solver-backed checks are capped to keep a sweep at seconds scale.
  const auto capped = [&](int cap) {
    SweepConfig c = config;
    c.trials = std::min(c.trials, cap);
    return c;
  };
  SweepReport report;
  for (const auto& check : registered_checks()) {
    int cap = config.trials;
    if (check.name == "optimality_oracle") cap = 200;
    if (check.name == "rho0_minimality" || check.name == "diagonal_limits") cap = 100;
    if (check.name == "minimax_robust") cap = 50;
    report.checks.push_back(check.run(capped(cap), Mutation::None));
  }
  return report;
}

}  // namespace qguess::harness
