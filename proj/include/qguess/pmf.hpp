#ifndef QGUESS_PMF_HPP
#define QGUESS_PMF_HPP

#include <algorithm>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qguess/error.hpp"
#include "qguess/types.hpp"

namespace qguess {

using Labels = std::vector<std::string>;

inline Labels default_labels(const std::string& prefix, Eigen::Index n) {
  Labels out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

namespace detail {

inline void check_labels(const Labels& labels) {
  if (labels.empty()) fail(ErrorCode::EmptyAlphabet);
  std::unordered_set<std::string> seen;
  for (const auto& l : labels)
    if (!seen.insert(l).second) fail(ErrorCode::DuplicateLabel, l);
}

inline Eigen::Index find_label(const Labels& labels, const std::string& label) {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) fail(ErrorCode::UnknownLabel, label);
  return static_cast<Eigen::Index>(it - labels.begin());
}

}  // namespace detail

/// Strictly positive pmf over a labeled finite alphabet. Entries are kept both
/// linearly and as logs; label order is canonical.
template <typename Scalar>
class BasicPmf {
 public:
  using scalar_type = Scalar;

  /// Builds from unnormalized log-weights (any finite reals).
  static BasicPmf from_log_weights(Labels labels, const Vector<Scalar>& log_weights) {
    detail::check_labels(labels);
    if (static_cast<Eigen::Index>(labels.size()) != log_weights.size())
      fail(ErrorCode::AlphabetMismatch, "label/weight length mismatch");
    BasicPmf p;
    p.labels_ = std::move(labels);
    const Vector<Scalar> shifted = log_weights.array() - log_weights.maxCoeff();
    const Vector<Scalar> w = shifted.array().exp();
    const Scalar total = w.sum();
    p.probs_ = w / total;
    p.log_probs_ = shifted.array() - std::log(total);
    return p;
  }

  Eigen::Index size() const { return probs_.size(); }
  const Labels& labels() const { return labels_; }
  const Vector<Scalar>& probs() const { return probs_; }
  const Vector<Scalar>& log_probs() const { return log_probs_; }
  Scalar operator[](Eigen::Index i) const { return probs_[i]; }
  Eigen::Index index_of(const std::string& label) const { return detail::find_label(labels_, label); }

  template <typename Other>
  BasicPmf<Other> cast() const {
    return BasicPmf<Other>::from_log_weights(labels_, log_probs_.template cast<Other>());
  }

 private:
  BasicPmf() = default;

  Labels labels_;
  Vector<Scalar> probs_;
  Vector<Scalar> log_probs_;
};

/// Strictly positive joint pmf; probs(y, x) with rows indexed by y.
template <typename Scalar>
class BasicJointPmf {
 public:
  using scalar_type = Scalar;

  static BasicJointPmf from_log_weights(Labels x_labels, Labels y_labels, const Matrix<Scalar>& log_weights) {
    detail::check_labels(x_labels);
    detail::check_labels(y_labels);
    if (log_weights.rows() != static_cast<Eigen::Index>(y_labels.size()) ||
        log_weights.cols() != static_cast<Eigen::Index>(x_labels.size()))
      fail(ErrorCode::AlphabetMismatch, "joint shape does not match labels");
    BasicJointPmf j;
    j.x_labels_ = std::move(x_labels);
    j.y_labels_ = std::move(y_labels);
    const Matrix<Scalar> shifted = log_weights.array() - log_weights.maxCoeff();
    const Matrix<Scalar> w = shifted.array().exp();
    const Scalar total = w.sum();
    j.probs_ = w / total;
    j.log_probs_ = shifted.array() - std::log(total);
    return j;
  }

  Eigen::Index x_size() const { return probs_.cols(); }
  Eigen::Index y_size() const { return probs_.rows(); }
  const Labels& x_labels() const { return x_labels_; }
  const Labels& y_labels() const { return y_labels_; }
  const Matrix<Scalar>& probs() const { return probs_; }
  const Matrix<Scalar>& log_probs() const { return log_probs_; }
  Scalar operator()(Eigen::Index y, Eigen::Index x) const { return probs_(y, x); }
  Eigen::Index y_index(const std::string& label) const { return detail::find_label(y_labels_, label); }

  bool same_alphabets(const BasicJointPmf& other) const {
    return x_labels_ == other.x_labels_ && y_labels_ == other.y_labels_;
  }

  template <typename Other>
  BasicJointPmf<Other> cast() const {
    return BasicJointPmf<Other>::from_log_weights(x_labels_, y_labels_, log_probs_.template cast<Other>());
  }

 private:
  BasicJointPmf() = default;

  Labels x_labels_;
  Labels y_labels_;
  Matrix<Scalar> probs_;
  Matrix<Scalar> log_probs_;
};

using Pmf = BasicPmf<double>;
using JointPmf = BasicJointPmf<double>;

/// Validates strictly positive weights and normalizes them by their sum.
template <typename Scalar = double>
BasicPmf<Scalar> validate_pmf(Labels labels, std::span<const Scalar> weights) {
  if (labels.empty() || weights.empty()) fail(ErrorCode::EmptyAlphabet);
  if (labels.size() != weights.size()) fail(ErrorCode::AlphabetMismatch, "label/weight length mismatch");
  Vector<Scalar> logw(static_cast<Eigen::Index>(weights.size()));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0) || !std::isfinite(static_cast<double>(weights[i])))
      fail(ErrorCode::NonPositiveWeight, "weight for '" + labels[i] + "'");
    logw[static_cast<Eigen::Index>(i)] = std::log(weights[i]);
  }
  return BasicPmf<Scalar>::from_log_weights(std::move(labels), logw);
}

template <typename Scalar = double>
BasicPmf<Scalar> validate_pmf(Labels labels, std::initializer_list<Scalar> weights) {
  return validate_pmf<Scalar>(std::move(labels), std::span<const Scalar>(weights.begin(), weights.size()));
}

/// Unlabeled convenience: labels x0, x1, ...
template <typename Scalar = double>
BasicPmf<Scalar> make_pmf(std::initializer_list<Scalar> weights) {
  return validate_pmf<Scalar>(default_labels("x", static_cast<Eigen::Index>(weights.size())),
                              std::span<const Scalar>(weights.begin(), weights.size()));
}

template <typename Scalar = double>
BasicJointPmf<Scalar> validate_joint(Labels x_labels, Labels y_labels, const Matrix<Scalar>& weights) {
  if (weights.size() == 0) fail(ErrorCode::EmptyAlphabet);
  if (!((weights.array() > 0).all()) || !weights.allFinite())
    fail(ErrorCode::NonPositiveWeight, "joint entries must be finite and > 0");
  Matrix<Scalar> logw = weights.array().log();
  return BasicJointPmf<Scalar>::from_log_weights(std::move(x_labels), std::move(y_labels), logw);
}

/// Rows are y, columns x; default labels.
template <typename Scalar = double>
BasicJointPmf<Scalar> make_joint(const Matrix<Scalar>& weights) {
  return validate_joint<Scalar>(default_labels("x", weights.cols()), default_labels("y", weights.rows()), weights);
}

/// The single-row joint used to run unconditional problems through the conditional code path.
template <typename Scalar>
BasicJointPmf<Scalar> as_joint(const BasicPmf<Scalar>& p) {
  Matrix<Scalar> logw = p.log_probs().transpose();
  return BasicJointPmf<Scalar>::from_log_weights(p.labels(), Labels{"_"}, logw);
}

/// ln sum_x P(x)^t via log-sum-exp.
template <typename Scalar>
Scalar log_power_sum(const BasicPmf<Scalar>& p, Scalar t) {
  return log_sum_exp((t * p.log_probs().array()).matrix());
}

/// W_t(P) = sum_x P(x)^t.
template <typename Scalar>
Scalar power_sum(const BasicPmf<Scalar>& p, Scalar t) {
  return std::exp(log_power_sum(p, t));
}

/// q-escort P^q / W_q(P).
template <typename Scalar>
BasicPmf<Scalar> escort(const BasicPmf<Scalar>& p, Scalar q) {
  return BasicPmf<Scalar>::from_log_weights(p.labels(), (q * p.log_probs().array()).matrix());
}

template <typename Scalar>
BasicJointPmf<Scalar> escort_joint(const BasicJointPmf<Scalar>& j, Scalar q) {
  Matrix<Scalar> logw = q * j.log_probs().array();
  return BasicJointPmf<Scalar>::from_log_weights(j.x_labels(), j.y_labels(), logw);
}

/// Per-row log sums ln sum_x P(x,y)^t.
template <typename Scalar>
Vector<Scalar> row_log_power_sums(const BasicJointPmf<Scalar>& j, Scalar t) {
  Vector<Scalar> out(j.y_size());
  for (Eigen::Index y = 0; y < j.y_size(); ++y) out[y] = log_sum_exp((t * j.log_probs().row(y).array()).matrix());
  return out;
}

template <typename Scalar>
BasicPmf<Scalar> marginal_y(const BasicJointPmf<Scalar>& j) {
  return BasicPmf<Scalar>::from_log_weights(j.y_labels(), row_log_power_sums(j, Scalar(1)));
}

template <typename Scalar>
BasicPmf<Scalar> conditional_given_y(const BasicJointPmf<Scalar>& j, Eigen::Index y) {
  if (y < 0 || y >= j.y_size()) fail(ErrorCode::UnknownLabel, "row index out of range");
  return BasicPmf<Scalar>::from_log_weights(j.x_labels(), j.log_probs().row(y).transpose());
}

template <typename Scalar>
BasicPmf<Scalar> conditional_given_y(const BasicJointPmf<Scalar>& j, const std::string& y_label) {
  return conditional_given_y(j, j.y_index(y_label));
}

/// Product pmf px (x) py with rows indexed by py's labels.
template <typename Scalar>
BasicJointPmf<Scalar> product_joint(const BasicPmf<Scalar>& px, const BasicPmf<Scalar>& py) {
  Matrix<Scalar> logw = py.log_probs().replicate(1, px.size());
  logw.rowwise() += px.log_probs().transpose();
  return BasicJointPmf<Scalar>::from_log_weights(px.labels(), py.labels(), logw);
}

}  // namespace qguess

#endif  // QGUESS_PMF_HPP
