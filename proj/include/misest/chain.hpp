#pragma once

#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "misest/error.hpp"

namespace misest {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Eigen::Index;

/// Recorded MCMC output: row i holds g(X_i), rows in iteration order.
///
/// The values are validated once (n >= 1, p >= 1, all entries finite) and
/// never modified afterwards, so a chain can be shared read-only between
/// threads.
template <typename Scalar>
class BasicChain {
 public:
  using MatrixType = Matrix<Scalar>;

  explicit BasicChain(MatrixType values) : values_(std::move(values)) {
    if (values_.rows() < 1 || values_.cols() < 1) {
      throw ShapeError("chain must have n >= 1 rows and p >= 1 columns");
    }
    using std::isfinite;
    // Row-major scan so the first offending cell reported is the earliest sample.
    for (Index i = 0; i < values_.rows(); ++i) {
      for (Index j = 0; j < values_.cols(); ++j) {
        if (!isfinite(values_(i, j))) throw NonFiniteEntry(i, j);
      }
    }
  }

  Index n() const { return values_.rows(); }
  Index p() const { return values_.cols(); }
  const MatrixType& values() const { return values_; }
  Scalar operator()(Index i, Index j) const { return values_(i, j); }

  /// Sample mean mu_n, each column summed pairwise.
  Vector<Scalar> mean() const;

  friend bool operator==(const BasicChain& a, const BasicChain& b) {
    return a.values_.rows() == b.values_.rows() && a.values_.cols() == b.values_.cols() &&
           a.values_ == b.values_;
  }

 private:
  MatrixType values_;
};

using Chain = BasicChain<double>;

namespace detail {

// Pairwise (cascade) summation; error grows as O(log n) instead of O(n).
template <typename Scalar, typename Column>
Scalar pairwise_sum(const Column& x, Index begin, Index end) {
  constexpr Index kBlock = 64;
  if (end - begin <= kBlock) {
    Scalar s(0);
    for (Index i = begin; i < end; ++i) s += x(i);
    return s;
  }
  const Index mid = begin + (end - begin) / 2;
  return pairwise_sum<Scalar>(x, begin, mid) + pairwise_sum<Scalar>(x, mid, end);
}

}  // namespace detail

template <typename Scalar>
Vector<Scalar> BasicChain<Scalar>::mean() const {
  Vector<Scalar> mu(p());
  for (Index j = 0; j < p(); ++j) {
    mu(j) = detail::pairwise_sum<Scalar>(values_.col(j), 0, n()) / Scalar(n());
  }
  return mu;
}

}  // namespace misest
