#ifndef QGUESS_STRATEGY_HPP
#define QGUESS_STRATEGY_HPP

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <numeric>
#include <vector>

#include "qguess/pmf.hpp"
#include "qguess/types.hpp"

namespace qguess {

/// Per-y bijection from X onto guess numbers {1..|X|}. ranks(y, x) is the
/// (1-based) guess at which x is tried when Y = y.
class GuessingStrategy {
 public:
  GuessingStrategy(Labels x_labels, Labels y_labels, RankMatrix ranks)
      : x_labels_(std::move(x_labels)), y_labels_(std::move(y_labels)), ranks_(std::move(ranks)) {
    detail::check_labels(x_labels_);
    detail::check_labels(y_labels_);
    if (ranks_.rows() != static_cast<Eigen::Index>(y_labels_.size()) ||
        ranks_.cols() != static_cast<Eigen::Index>(x_labels_.size()))
      fail(ErrorCode::AlphabetMismatch, "rank table shape does not match labels");
    const Eigen::Index m = ranks_.cols();
    for (Eigen::Index y = 0; y < ranks_.rows(); ++y) {
      std::vector<bool> used(static_cast<std::size_t>(m), false);
      for (Eigen::Index x = 0; x < m; ++x) {
        const int r = ranks_(y, x);
        if (r < 1 || r > m || used[static_cast<std::size_t>(r - 1)])
          fail(ErrorCode::InvalidStrategy, "row " + y_labels_[static_cast<std::size_t>(y)] + " is not a permutation");
        used[static_cast<std::size_t>(r - 1)] = true;
      }
    }
  }

  /// Default-labelled strategy (x0.., y0..; a single row is labelled "_").
  explicit GuessingStrategy(const RankMatrix& ranks)
      : GuessingStrategy(default_labels("x", ranks.cols()), ranks.rows() == 1 ? Labels{"_"} : default_labels("y", ranks.rows()),
                         ranks) {}

  Eigen::Index x_size() const { return ranks_.cols(); }
  Eigen::Index y_size() const { return ranks_.rows(); }
  const Labels& x_labels() const { return x_labels_; }
  const Labels& y_labels() const { return y_labels_; }
  const RankMatrix& ranks() const { return ranks_; }
  int operator()(Eigen::Index y, Eigen::Index x) const { return ranks_(y, x); }

  template <typename Scalar>
  bool matches(const BasicJointPmf<Scalar>& j) const {
    return x_labels_ == j.x_labels() && y_labels_ == j.y_labels();
  }

  bool operator==(const GuessingStrategy& other) const {
    return x_labels_ == other.x_labels_ && y_labels_ == other.y_labels_ && ranks_ == other.ranks_;
  }

 private:
  Labels x_labels_;
  Labels y_labels_;
  RankMatrix ranks_;
};

/// Guess in decreasing order of the q-escort of each row, ties by ascending
/// label position. The order depends on q only through its sign.
template <typename Scalar>
GuessingStrategy optimal_strategy(const BasicJointPmf<Scalar>& j, double q) {
  const Eigen::Index m = j.x_size();
  RankMatrix ranks(j.y_size(), m);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  for (Eigen::Index y = 0; y < j.y_size(); ++y) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const auto row = j.log_probs().row(y);
    if (q > 0.0) {
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return row[a] > row[b]; });
    } else if (q < 0.0) {
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return row[a] < row[b]; });
    }
    for (Eigen::Index k = 0; k < m; ++k) ranks(y, order[static_cast<std::size_t>(k)]) = static_cast<int>(k + 1);
  }
  return GuessingStrategy(j.x_labels(), j.y_labels(), std::move(ranks));
}

template <typename Scalar>
GuessingStrategy optimal_strategy(const BasicPmf<Scalar>& p, double q) {
  return optimal_strategy(as_joint(p), q);
}

/// G*_Q: guesses by the q-escort of the reference pmf Q instead of the true source.
template <typename Scalar>
GuessingStrategy mismatched_strategy(const BasicJointPmf<Scalar>& q_ref, double q) {
  return optimal_strategy(q_ref, q);
}

template <typename Scalar>
GuessingStrategy mismatched_strategy(const BasicPmf<Scalar>& q_ref, double q) {
  return optimal_strategy(q_ref, q);
}

namespace detail {

template <typename Scalar>
void require_match(const GuessingStrategy& g, const BasicJointPmf<Scalar>& j) {
  if (!g.matches(j)) fail(ErrorCode::AlphabetMismatch, "strategy alphabet differs from source");
}

template <typename Scalar>
Matrix<Scalar> log_rank_powers(const GuessingStrategy& g, double rho) {
  Matrix<Scalar> out(g.y_size(), g.x_size());
  for (Eigen::Index y = 0; y < g.y_size(); ++y)
    for (Eigen::Index x = 0; x < g.x_size(); ++x)
      out(y, x) = std::log(rank_power<Scalar>(g(y, x), rho));
  return out;
}

}  // namespace detail

/// Escort-weighted form: sum_y P_q(., y) sum_x P_q(x|y) G(x|y)^rho.
template <typename Scalar>
Scalar q_moment_escort_form(const GuessingStrategy& g, const BasicJointPmf<Scalar>& j, const NEParams& params) {
  detail::require_match(g, j);
  const Scalar q = static_cast<Scalar>(params.q);
  const auto esc = escort_joint(j, q);
  Scalar total = 0;
  for (Eigen::Index y = 0; y < j.y_size(); ++y) {
    const Scalar marginal = esc.probs().row(y).sum();
    const auto cond = conditional_given_y(esc, y);
    Scalar inner = 0;
    for (Eigen::Index x = 0; x < j.x_size(); ++x) inner += cond[x] * rank_power<Scalar>(g(y, x), params.rho);
    total += marginal * inner;
  }
  return total;
}

/// q-normalized moment E_q[G(X|Y)^rho] = sum G^rho P^q / sum P^q, in log space.
template <typename Scalar>
Scalar q_moment(const GuessingStrategy& g, const BasicJointPmf<Scalar>& j, const NEParams& params) {
  detail::require_match(g, j);
  const Scalar q = static_cast<Scalar>(params.q);
  const Matrix<Scalar> tilted = q * j.log_probs().array();
  const Matrix<Scalar> weighted = tilted + detail::log_rank_powers<Scalar>(g, params.rho);
  const Scalar value = std::exp(log_sum_exp(weighted.reshaped()) - log_sum_exp(tilted.reshaped()));
  assert(std::abs(static_cast<double>(value - q_moment_escort_form(g, j, params))) <=
         1e-12 * std::abs(static_cast<double>(value)));
  return value;
}

template <typename Scalar>
Scalar q_moment(const GuessingStrategy& g, const BasicPmf<Scalar>& p, const NEParams& params) {
  return q_moment(g, as_joint(p), params);
}

/// E_q[ln G(X|Y)].
template <typename Scalar>
Scalar q_log_moment(const GuessingStrategy& g, const BasicJointPmf<Scalar>& j, double q) {
  detail::require_match(g, j);
  const auto esc = escort_joint(j, static_cast<Scalar>(q));
  return (esc.probs().array() * detail::log_rank_powers<Scalar>(g, 1.0).array()).sum();
}

template <typename Scalar>
Scalar q_log_moment(const GuessingStrategy& g, const BasicPmf<Scalar>& p, double q) {
  return q_log_moment(g, as_joint(p), q);
}

/// Q^(G)(x, y) = 1 / (|Y| s_{rho,q} G(x|y)^{(1+rho)/q}); its conditional q-escort is
/// 1 / (s_{rho,1} G^{1+rho}).
template <typename Scalar = double>
BasicJointPmf<Scalar> q_pmf_from_strategy(const GuessingStrategy& g, const NEParams& params) {
  if (params.q == 0.0) fail(ErrorCode::ZeroQ, "Q^(G) needs q != 0");
  const Scalar exponent = static_cast<Scalar>((1.0 + params.rho) / params.q);
  Matrix<Scalar> logw = -exponent * detail::log_rank_powers<Scalar>(g, 1.0).array();
  return BasicJointPmf<Scalar>::from_log_weights(g.x_labels(), g.y_labels(), logw);
}

template <typename Scalar = double>
BasicJointPmf<Scalar> q_pmf_from_strategy(const GuessingStrategy& g, const NEParams& params, Eigen::Index y_count) {
  if (y_count != g.y_size()) fail(ErrorCode::AlphabetMismatch, "y_count differs from strategy rows");
  return q_pmf_from_strategy<Scalar>(g, params);
}

/// Ranks 1..M in label order on every row.
inline GuessingStrategy identity_strategy(const Labels& x_labels, const Labels& y_labels) {
  RankMatrix ranks(static_cast<Eigen::Index>(y_labels.size()), static_cast<Eigen::Index>(x_labels.size()));
  for (Eigen::Index y = 0; y < ranks.rows(); ++y)
    for (Eigen::Index x = 0; x < ranks.cols(); ++x) ranks(y, x) = static_cast<int>(x + 1);
  return GuessingStrategy(x_labels, y_labels, std::move(ranks));
}

/// Reverses the guessing order on every row (rank r becomes M + 1 - r).
inline GuessingStrategy reversed(const GuessingStrategy& g) {
  RankMatrix ranks = (static_cast<int>(g.x_size()) + 1) - g.ranks().array();
  return GuessingStrategy(g.x_labels(), g.y_labels(), std::move(ranks));
}

/// |X|!^|Y|, saturating at cap + 1.
inline std::uint64_t strategy_count(Eigen::Index x_size, Eigen::Index y_size, std::uint64_t cap) {
  std::uint64_t per_row = 1;
  for (Eigen::Index i = 2; i <= x_size; ++i) {
    per_row *= static_cast<std::uint64_t>(i);
    if (per_row > cap) return cap + 1;
  }
  std::uint64_t total = 1;
  for (Eigen::Index y = 0; y < y_size; ++y) {
    total *= per_row;
    if (total > cap) return cap + 1;
  }
  return total;
}

/// Every permutation of 1..m as a rank vector, lexicographic order.
inline std::vector<std::vector<int>> rank_permutations(int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 1);
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

/// Visits every strategy over the alphabets, lexicographic in the concatenated
/// rank rows (row 0 most significant). Throws BudgetExceeded above `budget`.
template <typename Fn>
void for_each_strategy(const Labels& x_labels, const Labels& y_labels, std::uint64_t budget, Fn&& fn) {
  const auto m = static_cast<Eigen::Index>(x_labels.size());
  const auto k = static_cast<Eigen::Index>(y_labels.size());
  if (strategy_count(m, k, budget) > budget) fail(ErrorCode::BudgetExceeded, "strategy space exceeds budget");
  const auto perms = rank_permutations(static_cast<int>(m));
  std::vector<std::size_t> digit(static_cast<std::size_t>(k), 0);
  RankMatrix ranks(k, m);
  while (true) {
    for (Eigen::Index y = 0; y < k; ++y)
      for (Eigen::Index x = 0; x < m; ++x) ranks(y, x) = perms[digit[static_cast<std::size_t>(y)]][static_cast<std::size_t>(x)];
    fn(GuessingStrategy(x_labels, y_labels, ranks));
    Eigen::Index pos = k - 1;
    while (pos >= 0 && ++digit[static_cast<std::size_t>(pos)] == perms.size()) {
      digit[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
}

}  // namespace qguess

#endif  // QGUESS_STRATEGY_HPP
