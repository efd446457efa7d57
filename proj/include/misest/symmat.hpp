#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "misest/chain.hpp"
#include "misest/error.hpp"

namespace misest {

/// Dense symmetric matrix. Every constructor produces entries that are
/// exactly symmetric, and sums, differences and scalar multiples of
/// symmetric matrices stay exactly symmetric in floating point.
template <typename Scalar>
class SymMatrix {
 public:
  using MatrixType = Matrix<Scalar>;

  SymMatrix() = default;

  static SymMatrix zero(Index p) { return SymMatrix(MatrixType::Zero(p, p)); }
  static SymMatrix identity(Index p) { return SymMatrix(MatrixType::Identity(p, p)); }

  /// Copies the lower triangle of m (including the diagonal) into both triangles.
  template <typename Derived>
  static SymMatrix from_lower(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols()) throw ShapeError("symmetric matrix must be square");
    MatrixType out = m.template triangularView<Eigen::Lower>();
    out.template triangularView<Eigen::StrictlyUpper>() = out.transpose();
    check_finite(out);
    return SymMatrix(std::move(out));
  }

  /// (m + m^T) / 2.
  template <typename Derived>
  static SymMatrix symmetric_part(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols()) throw ShapeError("symmetric matrix must be square");
    MatrixType out = (m + m.transpose()) / Scalar(2);
    check_finite(out);
    return SymMatrix(std::move(out));
  }

  template <typename Derived>
  static SymMatrix diagonal(const Eigen::MatrixBase<Derived>& d) {
    MatrixType out = d.asDiagonal();
    check_finite(out);
    return SymMatrix(std::move(out));
  }

  Index dim() const { return m_.rows(); }
  const MatrixType& matrix() const { return m_; }
  Scalar operator()(Index i, Index j) const { return m_(i, j); }

  SymMatrix& operator+=(const SymMatrix& o) {
    if (o.dim() != dim()) throw ShapeError("symmetric matrix dimensions differ");
    m_ += o.m_;
    return *this;
  }
  SymMatrix& operator-=(const SymMatrix& o) {
    if (o.dim() != dim()) throw ShapeError("symmetric matrix dimensions differ");
    m_ -= o.m_;
    return *this;
  }
  SymMatrix& operator*=(const Scalar& s) {
    m_ *= s;
    return *this;
  }

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(SymMatrix a, const Scalar& s) { return a *= s; }
  friend SymMatrix operator*(const Scalar& s, SymMatrix a) { return a *= s; }
  friend SymMatrix operator-(SymMatrix a) {
    a.m_ = -a.m_;
    return a;
  }
  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.dim() == b.dim() && a.m_ == b.m_;
  }

 private:
  explicit SymMatrix(MatrixType m) : m_(std::move(m)) {}

  static void check_finite(const MatrixType& m) {
    using std::isfinite;
    for (Index j = 0; j < m.cols(); ++j)
      for (Index i = 0; i < m.rows(); ++i)
        if (!isfinite(m(i, j))) throw NonFiniteEntry(i, j);
  }

  MatrixType m_;
};

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns:
/// m = eigenvectors * diag(eigenvalues) * eigenvectors^T.
template <typename Scalar>
struct Spectrum {
  Vector<Scalar> eigenvalues;
  Matrix<Scalar> eigenvectors;
};

/// Relative threshold used by is_pd.
template <typename Scalar>
inline const Scalar kPdTolerance = Scalar(1e-12);

namespace detail {

template <typename Scalar>
double max_offdiag(const Matrix<Scalar>& m) {
  double worst = 0.0;
  using std::abs;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (i != j) worst = std::max(worst, static_cast<double>(abs(m(i, j))));
  return worst;
}

template <typename Scalar>
Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solve(const SymMatrix<Scalar>& m, int options) {
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(m.matrix(), options);
  if (es.info() != Eigen::Success) {
    double residual = std::numeric_limits<double>::quiet_NaN();
    if (options & Eigen::ComputeEigenvectors) {
      const Matrix<Scalar>& q = es.eigenvectors();
      residual = max_offdiag<Scalar>(q.transpose() * m.matrix() * q);
    }
    throw EigenFailure(residual);
  }
  return es;
}

}  // namespace detail

template <typename Scalar>
Spectrum<Scalar> eigen_sym(const SymMatrix<Scalar>& m) {
  auto es = detail::solve(m, Eigen::ComputeEigenvectors);
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Ascending eigenvalues only; cheaper than eigen_sym.
template <typename Scalar>
Vector<Scalar> eigenvalues_sym(const SymMatrix<Scalar>& m) {
  return detail::solve(m, Eigen::EigenvaluesOnly).eigenvalues();
}

/// lambda_min > tau * max(1, |lambda_max|).
template <typename Scalar>
bool is_pd(const SymMatrix<Scalar>& m, const Scalar& tau = kPdTolerance<Scalar>) {
  const Vector<Scalar> ev = eigenvalues_sym(m);
  using std::abs;
  using std::max;
  const Scalar scale = max(Scalar(1), abs(ev(ev.size() - 1)));
  return ev(0) > tau * scale;
}

/// Determinant as (sign, log|det|); sign is 0 for a singular matrix.
template <typename Scalar>
struct SignedLogDet {
  int sign = 0;
  Scalar log_abs = Scalar(0);

  /// Ordering of the underlying determinant values.
  friend bool operator>(const SignedLogDet& a, const SignedLogDet& b) {
    if (a.sign != b.sign) return a.sign > b.sign;
    if (a.sign > 0) return a.log_abs > b.log_abs;
    if (a.sign < 0) return a.log_abs < b.log_abs;
    return false;
  }
};

template <typename Scalar>
SignedLogDet<Scalar> signed_logdet_from_eigenvalues(const Vector<Scalar>& ev) {
  SignedLogDet<Scalar> d{1, Scalar(0)};
  using std::abs;
  using std::log;
  for (Index k = 0; k < ev.size(); ++k) {
    if (ev(k) == Scalar(0)) return {0, Scalar(0)};
    if (ev(k) < Scalar(0)) d.sign = -d.sign;
    d.log_abs += log(abs(ev(k)));
  }
  return d;
}

template <typename Scalar>
SignedLogDet<Scalar> signed_logdet(const SymMatrix<Scalar>& m) {
  return signed_logdet_from_eigenvalues<Scalar>(eigenvalues_sym(m));
}

/// Sum of log eigenvalues; throws NotPositiveDefinite unless is_pd(m).
template <typename Scalar>
Scalar logdet_pd(const SymMatrix<Scalar>& m) {
  const Vector<Scalar> ev = eigenvalues_sym(m);
  using std::abs;
  using std::log;
  using std::max;
  if (!(ev(0) > kPdTolerance<Scalar> * max(Scalar(1), abs(ev(ev.size() - 1))))) {
    throw NotPositiveDefinite("log-determinant requested for a matrix that is not positive definite");
  }
  Scalar s(0);
  for (Index k = 0; k < ev.size(); ++k) s += log(ev(k));
  return s;
}

/// Q diag(max(lambda, 0)) Q^T.
///
/// Returned unchanged (bit-identical) when m has no negative eigenvalue;
/// otherwise the negative part is removed by adding the rank-k correction
/// sum_{lambda_k < 0} |lambda_k| q_k q_k^T, so result - m is PSD by construction.
template <typename Scalar>
SymMatrix<Scalar> positive_part(const SymMatrix<Scalar>& m) {
  const Spectrum<Scalar> s = eigen_sym(m);
  Index negatives = 0;
  while (negatives < s.eigenvalues.size() && s.eigenvalues(negatives) < Scalar(0)) ++negatives;
  if (negatives == 0) return m;
  const auto q = s.eigenvectors.leftCols(negatives);
  const Matrix<Scalar> correction =
      q * (-s.eigenvalues.head(negatives)).asDiagonal() * q.transpose();
  return m + SymMatrix<Scalar>::symmetric_part(correction);
}

}  // namespace misest
