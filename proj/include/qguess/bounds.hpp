#ifndef QGUESS_BOUNDS_HPP
#define QGUESS_BOUNDS_HPP

#include <cassert>
#include <limits>
#include <string_view>
#include <utility>

#include "qguess/entropy.hpp"
#include "qguess/pmf.hpp"
#include "qguess/strategy.hpp"
#include "qguess/types.hpp"

namespace qguess {

enum class TheoremId { T1, T2, T3_sandwich, M1, M2, M3_redundancy, M4 };

constexpr std::string_view theorem_name(TheoremId id) {
  switch (id) {
    case TheoremId::T1: return "T1";
    case TheoremId::T2: return "T2";
    case TheoremId::T3_sandwich: return "T3_sandwich";
    case TheoremId::M1: return "M1";
    case TheoremId::M2: return "M2";
    case TheoremId::M3_redundancy: return "M3_redundancy";
    case TheoremId::M4: return "M4";
  }
  return "?";
}

/// Violation threshold: relative 1e-10 plus an absolute 1e-12 floor.
inline constexpr double kBoundRelTol = 1e-10;
inline constexpr double kBoundAbsTol = 1e-12;

struct BoundReport {
  TheoremId theorem_id = TheoremId::T1;
  NEParams params;
  Eigen::Index alphabet_x = 0;
  Eigen::Index alphabet_y = 0;
  double moment = 0.0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  double slack_lower = 0.0;
  double slack_upper = 0.0;
  bool violated = false;

  /// Recomputes slacks and the violation flag from moment/lower/upper.
  void finalize() {
    slack_lower = moment - lower;
    slack_upper = upper - moment;
    const auto tol = [](double v) { return std::isfinite(v) ? kBoundRelTol * std::abs(v) + kBoundAbsTol : 0.0; };
    violated = !(std::isfinite(moment)) || moment < lower - tol(lower) || moment > upper + tol(upper);
  }
};

// ---------------------------------------------------------------------------
// Closed-form bounds (log space, exponentiated once)

/// ln L_{q,rho}(X) = (1+rho) ln W_{q/(1+rho)}(P) - ln W_q(P).
template <typename Scalar>
Scalar log_bound_L(const BasicPmf<Scalar>& p, const NEParams& params) {
  const Scalar a = static_cast<Scalar>(params.alpha());
  return static_cast<Scalar>(1.0 + params.rho) * log_power_sum(p, a) - log_power_sum(p, static_cast<Scalar>(params.q));
}

/// Escort form [sum_x P_q(x)^{1/(1+rho)}]^{1+rho}.
template <typename Scalar>
Scalar bound_L_escort_form(const BasicPmf<Scalar>& p, const NEParams& params) {
  const auto esc = escort(p, static_cast<Scalar>(params.q));
  return std::pow(esc.probs().array().pow(Scalar(1) / static_cast<Scalar>(1.0 + params.rho)).sum(),
                  static_cast<Scalar>(1.0 + params.rho));
}

template <typename Scalar>
Scalar bound_L(const BasicPmf<Scalar>& p, const NEParams& params) {
  const Scalar value = std::exp(log_bound_L(p, params));
  assert(std::abs(static_cast<double>(value - bound_L_escort_form(p, params))) <=
         1e-10 * static_cast<double>(value));
  return value;
}

/// ln L_{q,rho}(X|Y) = ln sum_y [sum_x P(x,y)^{q/(1+rho)}]^{1+rho} - ln sum_{x,y} P(x,y)^q.
template <typename Scalar>
Scalar log_bound_L_cond(const BasicJointPmf<Scalar>& j, const NEParams& params) {
  const Scalar a = static_cast<Scalar>(params.alpha());
  const Vector<Scalar> rows = row_log_power_sums(j, a);
  return log_sum_exp((static_cast<Scalar>(1.0 + params.rho) * rows.array()).matrix()) -
         log_sum_exp(row_log_power_sums(j, static_cast<Scalar>(params.q)));
}

/// Escort form sum_y P_q(., y) [sum_x P_q(x|y)^{1/(1+rho)}]^{1+rho}.
template <typename Scalar>
Scalar bound_L_cond_escort_form(const BasicJointPmf<Scalar>& j, const NEParams& params) {
  const auto esc = escort_joint(j, static_cast<Scalar>(params.q));
  const Scalar e = static_cast<Scalar>(1.0 + params.rho);
  Scalar total = 0;
  for (Eigen::Index y = 0; y < j.y_size(); ++y) {
    const auto cond = conditional_given_y(esc, y);
    total += esc.probs().row(y).sum() * std::pow(cond.probs().array().pow(Scalar(1) / e).sum(), e);
  }
  return total;
}

template <typename Scalar>
Scalar bound_L_cond(const BasicJointPmf<Scalar>& j, const NEParams& params) {
  const Scalar value = std::exp(log_bound_L_cond(j, params));
  assert(std::abs(static_cast<double>(value - bound_L_cond_escort_form(j, params))) <=
         1e-10 * static_cast<double>(value));
  return value;
}

/// ln L*_{q,rho}(P, Q): the mismatched-guessing upper bound
///   sum_y P_q(., y) sum_x P_q(x|y) [sum_x' (Q_q(x'|y) / Q_q(x|y))^{1/(1+rho)}]^rho.
/// Q enters only through its conditional escorts.
template <typename Scalar>
Scalar log_bound_L_star(const BasicJointPmf<Scalar>& p, const BasicJointPmf<Scalar>& q_ref, const NEParams& params) {
  detail::require_same_alphabet(p, q_ref);
  const Scalar q = static_cast<Scalar>(params.q);
  const Scalar a = static_cast<Scalar>(params.alpha());
  const Scalar rho = static_cast<Scalar>(params.rho);
  const Vector<Scalar> q_rows = row_log_power_sums(q_ref, a);
  Matrix<Scalar> terms(p.y_size(), p.x_size());
  for (Eigen::Index y = 0; y < p.y_size(); ++y)
    for (Eigen::Index x = 0; x < p.x_size(); ++x)
      terms(y, x) = q * p.log_probs()(y, x) + rho * (q_rows[y] - a * q_ref.log_probs()(y, x));
  return log_sum_exp(terms.reshaped()) - log_sum_exp(row_log_power_sums(p, q));
}

template <typename Scalar>
Scalar bound_L_star(const BasicJointPmf<Scalar>& p, const BasicJointPmf<Scalar>& q_ref, const NEParams& params) {
  return std::exp(log_bound_L_star(p, q_ref, params));
}

template <typename Scalar>
Scalar bound_L_star(const BasicPmf<Scalar>& p, const BasicPmf<Scalar>& q_ref, const NEParams& params) {
  return bound_L_star(as_joint(p), as_joint(q_ref), params);
}

/// R_q(P, G) = (1/rho) ln E_q[G^rho] - (1/rho) ln E_q[G_P^rho], moments under P.
template <typename Scalar>
Scalar redundancy(const BasicJointPmf<Scalar>& p, const GuessingStrategy& g, const NEParams& params) {
  detail::require_match(g, p);
  const auto best = optimal_strategy(p, params.q);
  const Scalar inv_rho = static_cast<Scalar>(1.0 / params.rho);
  return inv_rho * (std::log(q_moment(g, p, params)) - std::log(q_moment(best, p, params)));
}

template <typename Scalar>
Scalar redundancy(const BasicPmf<Scalar>& p, const GuessingStrategy& g, const NEParams& params) {
  return redundancy(as_joint(p), g, params);
}

// ---------------------------------------------------------------------------
// Theorem checks

namespace detail {

inline double harmonic_factor(Eigen::Index m, double rho) {
  return std::pow(1.0 + std::log(static_cast<double>(m)), -rho);
}

template <typename Scalar>
BoundReport make_report(TheoremId id, const BasicJointPmf<Scalar>& j, const NEParams& params) {
  BoundReport r;
  r.theorem_id = id;
  r.params = params;
  r.alphabet_x = j.x_size();
  r.alphabet_y = j.y_size();
  return r;
}

}  // namespace detail

/// E_q[G(X)^rho] >= (1 + ln|X|)^{-rho} L_{q,rho}(X), any strategy.
template <typename Scalar>
BoundReport check_theorem1(const BasicPmf<Scalar>& p, const GuessingStrategy& g, const NEParams& params) {
  const auto j = as_joint(p);
  auto r = detail::make_report(TheoremId::T1, j, params);
  r.moment = static_cast<double>(q_moment(g, j, params));
  r.lower = detail::harmonic_factor(p.size(), params.rho) * static_cast<double>(bound_L(p, params));
  r.finalize();
  return r;
}

/// Conditional analogue with L_{q,rho}(X|Y).
template <typename Scalar>
BoundReport check_theorem2(const BasicJointPmf<Scalar>& j, const GuessingStrategy& g, const NEParams& params) {
  auto r = detail::make_report(TheoremId::T2, j, params);
  r.moment = static_cast<double>(q_moment(g, j, params));
  r.lower = detail::harmonic_factor(j.x_size(), params.rho) * static_cast<double>(bound_L_cond(j, params));
  r.finalize();
  return r;
}

/// (1+ln|X|)^{-rho} L <= E_q[G*^rho] <= L for the optimal strategy.
template <typename Scalar>
BoundReport check_theorem3(const BasicJointPmf<Scalar>& j, const NEParams& params) {
  auto r = detail::make_report(TheoremId::T3_sandwich, j, params);
  const double bound = static_cast<double>(bound_L_cond(j, params));
  r.moment = static_cast<double>(q_moment(optimal_strategy(j, params.q), j, params));
  r.lower = detail::harmonic_factor(j.x_size(), params.rho) * bound;
  r.upper = bound;
  r.finalize();
  return r;
}

template <typename Scalar>
BoundReport check_theorem3(const BasicPmf<Scalar>& p, const NEParams& params) {
  return check_theorem3(as_joint(p), params);
}

/// Mismatched sandwich for G*_Q under source P:
///   (1+ln|X|)^{-rho} L*(P, Q^(G*_Q)) <= E_q[G*_Q^rho] <= L*(P, Q).
template <typename Scalar>
BoundReport check_mismatch_sandwich(const BasicJointPmf<Scalar>& p, const BasicJointPmf<Scalar>& q_ref,
                                    const NEParams& params) {
  detail::require_same_alphabet(p, q_ref);
  if (params.q == 0.0) fail(ErrorCode::ZeroQ);
  auto r = detail::make_report(TheoremId::M2, p, params);
  const auto g = mismatched_strategy(q_ref, params.q);
  const auto q_g = q_pmf_from_strategy<Scalar>(g, params);
  r.moment = static_cast<double>(q_moment(g, p, params));
  r.lower = detail::harmonic_factor(p.x_size(), params.rho) * static_cast<double>(bound_L_star(p, q_g, params));
  r.upper = static_cast<double>(bound_L_star(p, q_ref, params));
  r.finalize();
  return r;
}

/// |R_q(P,G) - q RE_{(q/(1+rho), q)}(P, Q^(G))| <= ln(1 + ln|X|), reported as
/// lower = qRE - slack, moment = R_q, upper = qRE + slack. Needs q > 0.
template <typename Scalar>
BoundReport check_mismatch3(const BasicJointPmf<Scalar>& p, const GuessingStrategy& g, const NEParams& params) {
  if (params.q == 0.0) fail(ErrorCode::ZeroQ);
  if (params.q < 0.0) fail(ErrorCode::NonPositiveQ, "relative (alpha,beta)-entropy link needs q > 0");
  auto r = detail::make_report(TheoremId::M3_redundancy, p, params);
  const auto q_g = q_pmf_from_strategy<Scalar>(g, params);
  const double q_re =
      params.q * static_cast<double>(relative_ab_cond(p, q_g, AlphaBeta(params.alpha(), params.q)));
  const double slack = log_harmonic_slack(static_cast<int>(p.x_size()));
  r.moment = static_cast<double>(redundancy(p, g, params));
  r.lower = q_re - slack;
  r.upper = q_re + slack;
  r.finalize();
  return r;
}

/// Returns (ln L_{q,rho}, rho * LNE_{(q/(1+rho), q)}); the two agree.
template <typename Scalar>
std::pair<Scalar, Scalar> lne_identity_check(const BasicPmf<Scalar>& p, const NEParams& params) {
  if (!(params.q > 0.0)) fail(ErrorCode::NonPositiveQ);
  return {log_bound_L(p, params),
          static_cast<Scalar>(params.rho) * lne(p, AlphaBeta(params.alpha(), params.q))};
}

/// Conditional variant: (ln L_{q,rho}(X|Y), rho * CLNE_{(q/(1+rho), q)}).
template <typename Scalar>
std::pair<Scalar, Scalar> lne_identity_check(const BasicJointPmf<Scalar>& j, const NEParams& params) {
  if (!(params.q > 0.0)) fail(ErrorCode::NonPositiveQ);
  return {log_bound_L_cond(j, params),
          static_cast<Scalar>(params.rho) * clne(j, AlphaBeta(params.alpha(), params.q))};
}

}  // namespace qguess

#endif  // QGUESS_BOUNDS_HPP
