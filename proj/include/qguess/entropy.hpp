#ifndef QGUESS_ENTROPY_HPP
#define QGUESS_ENTROPY_HPP

// Entropy and divergence functionals. All logarithms are natural (nats).

#include <cmath>

#include "qguess/pmf.hpp"
#include "qguess/types.hpp"

namespace qguess {

namespace detail {

inline void require_positive_order(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(ErrorCode::NonPositiveOrder, "order must be > 0");
}

inline void require_off_diagonal(const AlphaBeta& ab) {
  if (std::abs(ab.beta - ab.alpha) < kLimitThreshold)
    fail(ErrorCode::DegenerateParameters, "beta too close to alpha; use the diagonal form");
}

inline void require_divergence_domain(const AlphaBeta& ab) {
  require_off_diagonal(ab);
  if (std::abs(ab.beta) < kLimitThreshold) fail(ErrorCode::DegenerateParameters, "beta = 0 is outside the domain");
}

template <typename Scalar>
void require_same_alphabet(const BasicPmf<Scalar>& a, const BasicPmf<Scalar>& b) {
  if (a.labels() != b.labels()) fail(ErrorCode::AlphabetMismatch);
}

template <typename Scalar>
void require_same_alphabet(const BasicJointPmf<Scalar>& a, const BasicJointPmf<Scalar>& b) {
  if (!a.same_alphabets(b)) fail(ErrorCode::AlphabetMismatch);
}

}  // namespace detail

template <typename Scalar>
Scalar shannon(const BasicPmf<Scalar>& p) {
  return -(p.probs().array() * p.log_probs().array()).sum();
}

/// Renyi entropy of order alpha; the Shannon limit is used within 1e-9 of alpha = 1.
template <typename Scalar>
Scalar renyi(const BasicPmf<Scalar>& p, double alpha) {
  detail::require_positive_order(alpha);
  if (std::abs(alpha - 1.0) < kLimitThreshold) return shannon(p);
  const Scalar a = static_cast<Scalar>(alpha);
  return log_power_sum(p, a) / (Scalar(1) - a);
}

/// Logarithmic norm entropy,
///   (a b / (b - a)) ln[ (sum P^a)^{1/a} / (sum P^b)^{1/b} ],
/// evaluated as (b ln W_a - a ln W_b) / (b - a).
template <typename Scalar>
Scalar lne(const BasicPmf<Scalar>& p, const AlphaBeta& ab) {
  detail::require_positive_order(ab.alpha);
  detail::require_off_diagonal(ab);
  const Scalar a = static_cast<Scalar>(ab.alpha);
  const Scalar b = static_cast<Scalar>(ab.beta);
  return (b * log_power_sum(p, a) - a * log_power_sum(p, b)) / (b - a);
}

/// Limit of lne as beta -> alpha: -alpha E_{P_alpha}[ln P] + ln W_alpha(P).
template <typename Scalar>
Scalar lne_diag(const BasicPmf<Scalar>& p, double alpha) {
  detail::require_positive_order(alpha);
  const Scalar a = static_cast<Scalar>(alpha);
  const auto esc = escort(p, a);
  return -a * esc.probs().dot(p.log_probs()) + log_power_sum(p, a);
}

/// Conditional LNE over a joint pmf (rows y).
template <typename Scalar>
Scalar clne(const BasicJointPmf<Scalar>& j, const AlphaBeta& ab) {
  detail::require_positive_order(ab.alpha);
  detail::require_off_diagonal(ab);
  const Scalar a = static_cast<Scalar>(ab.alpha);
  const Scalar b = static_cast<Scalar>(ab.beta);
  const Vector<Scalar> rows_a = row_log_power_sums(j, a);
  const Scalar numerator = log_sum_exp(((b / a) * rows_a.array()).matrix());
  const Scalar denominator = log_sum_exp(row_log_power_sums(j, b));
  return a / (b - a) * (numerator - denominator);
}

/// Diagonal (alpha = beta) conditional LNE, two-term closed form.
template <typename Scalar>
Scalar clne_diag(const BasicJointPmf<Scalar>& j, double alpha) {
  detail::require_positive_order(alpha);
  const Scalar a = static_cast<Scalar>(alpha);
  const auto esc = escort_joint(j, a);
  const Scalar first = -a * (esc.probs().array() * j.log_probs().array()).sum();
  // softmax over per-row log sums equals the escort y-marginal
  const Vector<Scalar> rows = row_log_power_sums(j, a);
  const Vector<Scalar> weights = (rows.array() - log_sum_exp(rows)).exp();
  return first + weights.dot(rows);
}

/// Kullback-Leibler divergence sum Q ln(Q/P).
template <typename Scalar>
Scalar kl(const BasicPmf<Scalar>& q, const BasicPmf<Scalar>& p) {
  detail::require_same_alphabet(q, p);
  return (q.probs().array() * (q.log_probs() - p.log_probs()).array()).sum();
}

/// Relative (alpha, beta)-entropy:
///   1/(a-b) ln sum P^a - a/(b(a-b)) ln sum P^b Q^{a-b} + 1/b ln sum Q^a.
/// Requires beta not in {0, alpha}. Nonnegative, zero iff P = Q.
template <typename Scalar>
Scalar relative_ab(const BasicPmf<Scalar>& p, const BasicPmf<Scalar>& q, const AlphaBeta& ab) {
  detail::require_same_alphabet(p, q);
  detail::require_positive_order(ab.alpha);
  detail::require_divergence_domain(ab);
  const Scalar a = static_cast<Scalar>(ab.alpha);
  const Scalar b = static_cast<Scalar>(ab.beta);
  const Scalar cross = log_sum_exp((b * p.log_probs().array() + (a - b) * q.log_probs().array()).matrix());
  return log_power_sum(p, a) / (a - b) - a / (b * (a - b)) * cross + log_power_sum(q, a) / b;
}

/// Conditional relative (alpha, beta)-entropy between joints over the same X x Y:
///   a/(b(b-a)) ln[ sum_y {sum_x P^b Q^{a-b}} {sum_x Q^a}^{b/a-1} / sum_y {sum_x P^a}^{b/a} ].
/// Depends on Q only through its conditionals Q(x|y).
template <typename Scalar>
Scalar relative_ab_cond(const BasicJointPmf<Scalar>& p, const BasicJointPmf<Scalar>& q, const AlphaBeta& ab) {
  detail::require_same_alphabet(p, q);
  detail::require_positive_order(ab.alpha);
  detail::require_divergence_domain(ab);
  const Scalar a = static_cast<Scalar>(ab.alpha);
  const Scalar b = static_cast<Scalar>(ab.beta);
  const Vector<Scalar> q_rows = row_log_power_sums(q, a);
  const Vector<Scalar> p_rows = row_log_power_sums(p, a);
  Vector<Scalar> num(p.y_size());
  for (Eigen::Index y = 0; y < p.y_size(); ++y) {
    const Scalar cross =
        log_sum_exp((b * p.log_probs().row(y).array() + (a - b) * q.log_probs().row(y).array()).matrix());
    num[y] = cross + (b / a - Scalar(1)) * q_rows[y];
  }
  const Scalar den = log_sum_exp(((b / a) * p_rows.array()).matrix());
  return a / (b * (b - a)) * (log_sum_exp(num) - den);
}

}  // namespace qguess

#endif  // QGUESS_ENTROPY_HPP
