#include "qguess/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qguess/entropy.hpp"
#include "qguess/rng.hpp"

namespace qguess {

SourceFamily::SourceFamily(std::vector<JointPmf> members) : members_(std::move(members)) {
  if (members_.empty()) fail(ErrorCode::InvalidConfig, "source family is empty");
  for (const auto& m : members_)
    if (!m.same_alphabets(members_.front())) fail(ErrorCode::AlphabetMismatch, "family members differ in alphabets");
}

JointPmf SourceFamily::barycenter() const {
  Matrix<double> sum = Matrix<double>::Zero(front().y_size(), front().x_size());
  for (const auto& m : members_) sum += m.probs();
  return validate_joint<double>(front().x_labels(), front().y_labels(), sum / static_cast<double>(size()));
}

double worst_redundancy(const SourceFamily& family, const GuessingStrategy& g, const NEParams& params) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& p : family.members()) worst = std::max(worst, redundancy(p, g, params));
  return worst;
}

double minimax_objective(const SourceFamily& family, const JointPmf& q_ref, const NEParams& params) {
  if (!(params.q > 0.0)) fail(ErrorCode::NonPositiveQ);
  const AlphaBeta ab(params.alpha(), params.q);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& p : family.members()) worst = std::max(worst, params.q * relative_ab_cond(p, q_ref, ab));
  return worst;
}

namespace {

// Evaluates f_P(theta) = q * RE(P, Q) where Q(x|y) is proportional to exp(theta(y, x)).
class MemberObjectives {
 public:
  MemberObjectives(const SourceFamily& family, const NEParams& params)
      : rows_(family.front().y_size()), cols_(family.front().x_size()) {
    alpha_ = params.alpha();
    beta_ = params.q;
    scale_ = params.q * alpha_ / (beta_ * (beta_ - alpha_));
    for (const auto& p : family.members()) {
      log_p_.push_back(p.log_probs());
      const Vector<double> rows = row_log_power_sums(p, alpha_);
      denominators_.push_back(log_sum_exp(((beta_ / alpha_) * rows.array()).matrix()));
    }
    num_.resize(rows_);
    scratch_.resize(cols_);
  }

  std::size_t size() const { return log_p_.size(); }
  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }

  double member(std::size_t i, const Matrix<double>& theta) {
    const Matrix<double>& lp = log_p_[i];
    for (Eigen::Index y = 0; y < rows_; ++y) {
      for (Eigen::Index x = 0; x < cols_; ++x) scratch_[x] = alpha_ * theta(y, x);
      const double q_row = log_sum_exp(scratch_);
      for (Eigen::Index x = 0; x < cols_; ++x) scratch_[x] = beta_ * lp(y, x) + (alpha_ - beta_) * theta(y, x);
      num_[y] = log_sum_exp(scratch_) + (beta_ / alpha_ - 1.0) * q_row;
    }
    return scale_ * (log_sum_exp(num_) - denominators_[i]);
  }

  void all(const Matrix<double>& theta, Vector<double>& out) {
    out.resize(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) out[static_cast<Eigen::Index>(i)] = member(i, theta);
  }

  double max(const Matrix<double>& theta) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size(); ++i) m = std::max(m, member(i, theta));
    return m;
  }

 private:
  Eigen::Index rows_;
  Eigen::Index cols_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double scale_ = 0.0;
  std::vector<Matrix<double>> log_p_;
  std::vector<double> denominators_;
  Vector<double> num_;
  Vector<double> scratch_;
};

// Smooth surrogate: tau * lse(f / tau), or a fixed convex combination of members.
struct Surrogate {
  MemberObjectives* members;
  double tau = 1.0;
  const Vector<double>* weights = nullptr;
  Vector<double> values;

  double operator()(const Matrix<double>& theta) {
    members->all(theta, values);
    if (weights != nullptr) return weights->dot(values);
    return tau * log_sum_exp((values / tau).eval());
  }
};

struct DescentOutcome {
  long iterations = 0;
  bool converged = false;
};

constexpr double kGradientStep = 1e-6;

void center_rows(Matrix<double>& theta) {
  for (Eigen::Index y = 0; y < theta.rows(); ++y) theta.row(y).array() -= theta.row(y).mean();
}

// Multiplicative update Q <- Q * exp(-step * grad), i.e. gradient steps on log Q,
// with Armijo backtracking. Stops when successive values differ by < tol.
DescentOutcome descend(Surrogate& f, Matrix<double>& theta, double tol, long budget) {
  DescentOutcome out;
  Matrix<double> grad(theta.rows(), theta.cols());
  Matrix<double> trial(theta.rows(), theta.cols());
  double current = f(theta);
  double step = 1.0;
  while (out.iterations < budget) {
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
      trial = theta;
      trial.data()[k] += kGradientStep;
      const double up = f(trial);
      trial.data()[k] -= 2.0 * kGradientStep;
      const double down = f(trial);
      grad.data()[k] = (up - down) / (2.0 * kGradientStep);
    }
    for (Eigen::Index y = 0; y < grad.rows(); ++y) grad.row(y).array() -= grad.row(y).mean();
    const double norm2 = grad.squaredNorm();
    ++out.iterations;
    if (!(norm2 > 1e-28)) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    double next = current;
    while (step > 1e-14) {
      trial = theta - step * grad;
      next = f(trial);
      if (next <= current - 1e-4 * step * norm2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      out.converged = true;
      break;
    }
    const double decrease = current - next;
    theta = trial;
    center_rows(theta);
    current = next;
    step = std::min(step * 2.0, 1e3);
    if (decrease < tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

Matrix<double> log_conditionals(const JointPmf& j) {
  Matrix<double> theta = j.log_probs();
  center_rows(theta);
  return theta;
}

JointPmf assemble(const Matrix<double>& theta, const Pmf& y_marginal, const JointPmf& like) {
  Matrix<double> logw(theta.rows(), theta.cols());
  for (Eigen::Index y = 0; y < theta.rows(); ++y) {
    const double norm = log_sum_exp(theta.row(y).transpose().eval());
    logw.row(y) = theta.row(y).array() - norm + y_marginal.log_probs()[y];
  }
  return JointPmf::from_log_weights(like.x_labels(), like.y_labels(), logw);
}

std::vector<double> temperature_schedule(const SolverConfig& config) {
  std::vector<double> out;
  for (double t = config.temperature_start; t > config.temperature_end * 1.000001; t *= 0.25) out.push_back(t);
  out.push_back(config.temperature_end);
  return out;
}

}  // namespace

MinimaxResult solve_minimax(const SourceFamily& family, const NEParams& params, const SolverConfig& config) {
  if (!(params.q > 0.0)) fail(ErrorCode::NonPositiveQ, "minimax redundancy needs q > 0");
  if (config.restarts < 0 || !(config.tol > 0.0) || config.max_iterations < 1 ||
      !(config.temperature_end > 0.0) || config.temperature_start < config.temperature_end)
    fail(ErrorCode::InvalidConfig, "invalid solver settings");

  MemberObjectives members(family, params);
  const JointPmf center = family.barycenter();
  const Pmf y_marginal = marginal_y(center);
  const auto schedule = temperature_schedule(config);

  MinimaxResult best{center, std::numeric_limits<double>::infinity(), 0, false, 0.0};
  Matrix<double> best_theta;
  double best_tau = config.temperature_end;
  long total_iterations = 0;

  for (int restart = 0; restart <= config.restarts; ++restart) {
    Matrix<double> theta;
    if (restart == 0) {
      theta = log_conditionals(center);
    } else {
      CounterRng rng({config.seed, 0x6d696e696d6178ULL, static_cast<std::uint64_t>(restart)});
      const Vector<double> w = random_simplex(rng, members.rows() * members.cols(), 1e-3);
      theta = w.reshaped<Eigen::RowMajor>(members.rows(), members.cols()).array().log();
      center_rows(theta);
    }
    long iterations = 0;
    bool converged = true;
    for (double tau : schedule) {
      Surrogate f{&members, tau, nullptr, {}};
      const auto outcome = descend(f, theta, config.tol, config.max_iterations - iterations);
      iterations += outcome.iterations;
      converged = outcome.converged;
      if (iterations >= config.max_iterations) break;
    }
    total_iterations += iterations;
    const double value = members.max(theta);
    if (value < best.c_value) {
      best.c_value = value;
      best.converged = converged;
      best_theta = theta;
      best_tau = schedule.back();
    }
  }

  best.q_star = assemble(best_theta, y_marginal, center);
  best.iterations = total_iterations;

  // Weak-duality certificate: for weights lambda, min_Q sum lambda f_P <= C.
  Vector<double> values;
  members.all(best_theta, values);
  Vector<double> lambda = ((values.array() - values.maxCoeff()) / best_tau).exp();
  lambda /= lambda.sum();
  Surrogate dual{&members, best_tau, &lambda, {}};
  Matrix<double> dual_theta = best_theta;
  descend(dual, dual_theta, config.tol, config.max_iterations);
  best.certificate_gap = std::max(0.0, best.c_value - dual(dual_theta));
  return best;
}

RobustResult robust_strategy(const SourceFamily& family, const NEParams& params, const SolverConfig& config) {
  auto solved = solve_minimax(family, params, config);
  const JointPmf& front = family.front();
  GuessingStrategy robust = mismatched_strategy(solved.q_star, params.q);

  const double slack = log_harmonic_slack(static_cast<int>(front.x_size()));
  BoundReport report;
  report.theorem_id = TheoremId::M4;
  report.params = params;
  report.alphabet_x = front.x_size();
  report.alphabet_y = front.y_size();
  report.moment = worst_redundancy(family, robust, params);
  report.lower = solved.c_value - slack;
  report.upper = solved.c_value + slack;
  report.finalize();

  double best_worst = std::numeric_limits<double>::infinity();
  std::size_t checked = 0;
  const auto visit = [&](const GuessingStrategy& g) {
    best_worst = std::min(best_worst, worst_redundancy(family, g, params));
    ++checked;
  };
  const bool exhaustive =
      strategy_count(front.x_size(), front.y_size(), kRobustEnumerationBudget) <= kRobustEnumerationBudget;
  if (exhaustive) {
    for_each_strategy(front.x_labels(), front.y_labels(), kRobustEnumerationBudget, visit);
  } else {
    visit(robust);
    for (const auto& p : family.members()) visit(optimal_strategy(p, params.q));
    CounterRng rng({config.seed, 0x726f62757374ULL});
    for (int i = 0; i < 256; ++i) visit(random_strategy(rng, front.x_labels(), front.y_labels()));
  }
  const double tol = kBoundRelTol * std::abs(report.lower) + kBoundAbsTol;
  if (best_worst < report.lower - tol) report.violated = true;

  return RobustResult{std::move(robust), report, std::move(solved), best_worst, checked, exhaustive};
}

}  // namespace qguess
