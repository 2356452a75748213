#ifndef QGUESS_RNG_HPP
#define QGUESS_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "qguess/pmf.hpp"
#include "qguess/strategy.hpp"

namespace qguess {

/// Counter-based generator: output k is splitmix64(key + k * golden). The key is
/// derived from a list of stream ids, so draws never depend on platform RNG state.
class CounterRng {
 public:
  explicit CounterRng(std::initializer_list<std::uint64_t> stream) {
    std::uint64_t k = 0x6a09e667f3bcc908ULL;
    for (auto s : stream) k = mix(k ^ mix(s + 0x9e3779b97f4a7c15ULL));
    key_ = k;
  }

  std::uint64_t next_u64() { return mix(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL); }

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

/// Dirichlet(1) weights, clamped below at `floor` and renormalized.
inline Vector<double> random_simplex(CounterRng& rng, Eigen::Index n, double floor = 1e-9) {
  Vector<double> w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = -std::log(rng.uniform());
  w /= w.sum();
  w = w.cwiseMax(floor);
  return w / w.sum();
}

inline Pmf random_pmf(CounterRng& rng, Eigen::Index n, double floor = 1e-9) {
  const Vector<double> w = random_simplex(rng, n, floor);
  return validate_pmf<double>(default_labels("x", n), std::span<const double>(w.data(), static_cast<std::size_t>(n)));
}

inline JointPmf random_joint(CounterRng& rng, Eigen::Index x_size, Eigen::Index y_size, double floor = 1e-9) {
  const Vector<double> w = random_simplex(rng, x_size * y_size, floor);
  Matrix<double> m = w.reshaped<Eigen::RowMajor>(y_size, x_size);
  return make_joint<double>(m);
}

inline GuessingStrategy random_strategy(CounterRng& rng, const Labels& x_labels, const Labels& y_labels) {
  const auto m = static_cast<Eigen::Index>(x_labels.size());
  RankMatrix ranks(static_cast<Eigen::Index>(y_labels.size()), m);
  std::vector<int> perm(static_cast<std::size_t>(m));
  for (Eigen::Index y = 0; y < ranks.rows(); ++y) {
    std::iota(perm.begin(), perm.end(), 1);
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    for (Eigen::Index x = 0; x < m; ++x) ranks(y, x) = perm[static_cast<std::size_t>(x)];
  }
  return GuessingStrategy(x_labels, y_labels, std::move(ranks));
}

}  // namespace qguess

#endif  // QGUESS_RNG_HPP
