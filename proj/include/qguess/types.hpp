#ifndef QGUESS_TYPES_HPP
#define QGUESS_TYPES_HPP

#include <cmath>
#include <limits>

#include <Eigen/Core>

#include "qguess/error.hpp"

namespace qguess {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Rows are indexed by y, columns by x.
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using RankMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Parameters within this distance of a removable singularity use the closed-form limit.
inline constexpr double kLimitThreshold = 1e-9;

/// Pair (q, rho): non-extensivity index and moment order.
struct NEParams {
  double q = 1.0;
  double rho = 1.0;

  NEParams() = default;
  NEParams(double q_, double rho_) : q(q_), rho(rho_) {
    if (!std::isfinite(q)) fail(ErrorCode::InvalidConfig, "q must be finite");
    if (!(rho > 0.0) || !std::isfinite(rho)) fail(ErrorCode::NonPositiveRho, "rho must be > 0");
  }

  /// The LNE/relative-entropy order q/(1+rho) paired with q.
  double alpha() const { return q / (1.0 + rho); }
};

struct AlphaBeta {
  double alpha = 1.0;
  double beta = 2.0;

  AlphaBeta() = default;
  AlphaBeta(double a, double b) : alpha(a), beta(b) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(ErrorCode::NonPositiveOrder, "alpha must be > 0");
    if (!std::isfinite(beta)) fail(ErrorCode::DegenerateParameters, "beta must be finite");
  }
};

/// log(sum(exp(v))) without overflow. Empty input gives -inf.
template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::DenseBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  if (v.size() == 0) return -std::numeric_limits<Scalar>::infinity();
  const Scalar m = v.maxCoeff();
  if (!std::isfinite(static_cast<double>(m))) return m;
  return m + std::log((v.derived().array() - m).exp().sum());
}

/// G^rho with exact integer powers for rho in {1, 2}.
template <typename Scalar>
Scalar rank_power(int rank, double rho) {
  if (rho == 1.0) return static_cast<Scalar>(rank);
  if (rho == 2.0) return static_cast<Scalar>(rank) * static_cast<Scalar>(rank);
  return std::exp(static_cast<Scalar>(rho) * std::log(static_cast<Scalar>(rank)));
}

/// Harmonic-type sum s = sum_{i=1}^{m} i^{-t}.
template <typename Scalar = double>
Scalar inverse_power_sum(int m, Scalar t) {
  Scalar s = 0;
  for (int i = m; i >= 1; --i) s += std::exp(-t * std::log(static_cast<Scalar>(i)));
  return s;
}

/// The factor ln(1 + ln M) appearing in every sandwich bound.
inline double log_harmonic_slack(int alphabet_size) {
  return std::log1p(std::log(static_cast<double>(alphabet_size)));
}

}  // namespace qguess

#endif  // QGUESS_TYPES_HPP
