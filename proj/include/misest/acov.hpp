#pragma once

#include <string>
#include <vector>

#include "misest/chain.hpp"
#include "misest/symmat.hpp"

namespace misest {

/// Empirical autocovariances of one chain with the lag-pair sums
///
///   gamma_{n,t}   = (1/n) sum_{i=1}^{n-t} (x_i - mu_n)(x_{i+t} - mu_n)^T
///   Gamma_{n,i}   = sym(gamma_{n,2i}) + sym(gamma_{n,2i+1})
///   Sigma_{n,m}   = -gamma_{n,0} + 2 sum_{i<=m} Gamma_{n,i}
///
/// where sym(g) = (g + g^T)/2. Pair matrices are computed on first use and
/// cached. The cache is not synchronized: confine an instance to one thread.
template <typename Scalar>
class LagPairSequence {
 public:
  explicit LagPairSequence(const BasicChain<Scalar>& chain)
      : centered_(chain.values().rowwise() - chain.mean().transpose()) {
    gamma0_ = sym_autocov(0);
  }

  Index n() const { return centered_.rows(); }
  Index p() const { return centered_.cols(); }

  /// floor(n/2 - 1); -1 when n < 2 and no pair exists.
  Index max_pair_index() const { return n() / 2 - 1; }

  const SymMatrix<Scalar>& gamma0() const { return gamma0_; }

  /// gamma_{n,t}; generally nonsymmetric for t >= 1. The lag-0 matrix is
  /// returned exactly symmetric.
  Matrix<Scalar> autocov(Index t) const {
    if (t < 0 || t >= n()) {
      throw RangeError("lag " + std::to_string(t) + " outside [0, " + std::to_string(n() - 1) + "]");
    }
    const Index len = n() - t;
    Matrix<Scalar> g = centered_.topRows(len).transpose() * centered_.bottomRows(len);
    g /= Scalar(n());
    if (t == 0) return SymMatrix<Scalar>::symmetric_part(g).matrix();
    return g;
  }

  SymMatrix<Scalar> sym_autocov(Index t) const {
    return SymMatrix<Scalar>::symmetric_part(autocov(t));
  }

  /// Gamma_{n,i}, 0 <= i <= max_pair_index().
  const SymMatrix<Scalar>& pair(Index i) {
    check_pair_index(i);
    while (static_cast<Index>(pairs_.size()) <= i) {
      const Index k = static_cast<Index>(pairs_.size());
      pairs_.push_back(sym_autocov(2 * k) + sym_autocov(2 * k + 1));
    }
    return pairs_[static_cast<std::size_t>(i)];
  }

  /// Sigma_{n,m}, accumulated as Sigma_{n,m-1} + 2 Gamma_{n,m}.
  SymMatrix<Scalar> partial_sum(Index m) {
    check_pair_index(m);
    SymMatrix<Scalar> s = -gamma0_ + Scalar(2) * pair(0);
    for (Index i = 1; i <= m; ++i) s += Scalar(2) * pair(i);
    return s;
  }

  /// Number of pair matrices materialized so far.
  Index pairs_computed() const { return static_cast<Index>(pairs_.size()); }

 private:
  void check_pair_index(Index i) const {
    if (i < 0 || i > max_pair_index()) {
      throw RangeError("pair index " + std::to_string(i) + " outside [0, " +
                       std::to_string(max_pair_index()) + "]");
    }
  }

  Matrix<Scalar> centered_;
  SymMatrix<Scalar> gamma0_;
  std::vector<SymMatrix<Scalar>> pairs_;
};

template <typename Scalar>
Matrix<Scalar> autocov(const BasicChain<Scalar>& chain, Index t) {
  return LagPairSequence<Scalar>(chain).autocov(t);
}

template <typename Scalar>
SymMatrix<Scalar> sym_autocov(const BasicChain<Scalar>& chain, Index t) {
  return LagPairSequence<Scalar>(chain).sym_autocov(t);
}

template <typename Scalar>
SymMatrix<Scalar> paired_gamma(const BasicChain<Scalar>& chain, Index i) {
  LagPairSequence<Scalar> seq(chain);
  return seq.pair(i);
}

template <typename Scalar>
SymMatrix<Scalar> partial_sum_sigma(const BasicChain<Scalar>& chain, Index m) {
  LagPairSequence<Scalar> seq(chain);
  return seq.partial_sum(m);
}

}  // namespace misest
