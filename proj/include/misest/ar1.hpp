#pragma once

#include <cstdint>
#include <string>

#include "misest/chain.hpp"
#include "misest/hadamard.hpp"
#include "misest/rng.hpp"
#include "misest/symmat.hpp"

namespace misest {

/// X_{k+1} = A X_k + U_{k+1}, U ~ N_p(theta, V).
///
/// The chain is reversible iff A V is symmetric; it is stationary when the
/// spectral radius of A is below one.
template <typename Scalar>
struct Ar1Params {
  Matrix<Scalar> A;
  SymMatrix<Scalar> V;
  Vector<Scalar> theta;

  Index p() const { return theta.size(); }

  /// Throws ShapeError / Error when the reversibility or stability conditions fail.
  void validate() const;
  /// Largest |eigenvalue| of A. A is similar to the symmetric L^{-1} A L,
  /// V = L L^T, because A V is symmetric.
  Scalar spectral_radius() const;
};

/// Which closed form is used for the lag autocovariances.
///
/// Standard: gamma_t = A^t C and Sigma = {2 (I - A)^{-1} - I} C.
/// PrintedExponent: gamma_t = A^{2t} C and Sigma = {2 (I - A^2)^{-1} - I} C,
/// kept only to compare against; it disagrees with the scalar case
/// sigma^2 = V / (1 - a)^2.
enum class LagFormula { Standard, PrintedExponent };

/// Stationary mean, covariance and the lag structure of a reversible AR(1).
template <typename Scalar>
class Ar1Truth {
 public:
  Ar1Truth(const Ar1Params<Scalar>& params, LagFormula formula = LagFormula::Standard);

  const Vector<Scalar>& mu() const { return mu_; }
  /// Stationary covariance (I - A^2)^{-1} V, equal to gamma_0.
  const SymMatrix<Scalar>& C() const { return C_; }
  /// Asymptotic covariance of sqrt(n)(mu_n - mu).
  const SymMatrix<Scalar>& Sigma() const { return Sigma_; }

  /// Lag-t autocovariance cov(X_{k+t}, X_k).
  Matrix<Scalar> gamma(Index t) const;
  /// Gamma_i = gamma_{2i} + gamma_{2i+1} (symmetrized).
  SymMatrix<Scalar> pair(Index i) const;
  /// Sigma_m = -gamma_0 + 2 sum_{i<=m} Gamma_i.
  SymMatrix<Scalar> partial_sum(Index m) const;

 private:
  Matrix<Scalar> A_;
  Matrix<Scalar> lag_step_;  // A, or A^2 under the printed exponent
  Vector<Scalar> mu_;
  SymMatrix<Scalar> C_;
  SymMatrix<Scalar> Sigma_;
};

template <typename Scalar>
Ar1Truth<Scalar> ar1_truth(const Ar1Params<Scalar>& params,
                           LagFormula formula = LagFormula::Standard) {
  return Ar1Truth<Scalar>(params, formula);
}

/// theta = 1_p, V = I_p, A = p^{-1} H diag(2^{-1}, ..., 2^{-p}) H^T with H = hadamard(p).
/// A is symmetric with eigenvalues 2^{-k}, so the spectral radius is 1/2.
template <typename Scalar>
Ar1Params<Scalar> ar1_hadamard_fixture(int p) {
  const Matrix<Scalar> h = hadamard(p).template cast<Scalar>();
  Vector<Scalar> d(p);
  Scalar w(1);
  for (int k = 0; k < p; ++k) {
    w /= Scalar(2);
    d(k) = w;
  }
  Matrix<Scalar> a = h * d.asDiagonal() * h.transpose();
  a /= Scalar(p);
  return {std::move(a), SymMatrix<Scalar>::identity(p), Vector<Scalar>::Ones(p)};
}

/// Scalar AR(1) x_{k+1} = a x_k + u, u ~ N(theta, v).
template <typename Scalar>
Ar1Params<Scalar> ar1_scalar(Scalar a, Scalar v, Scalar theta) {
  Matrix<Scalar> am(1, 1);
  am(0, 0) = a;
  Matrix<Scalar> vm(1, 1);
  vm(0, 0) = v;
  Vector<Scalar> t(1);
  t(0) = theta;
  return {std::move(am), SymMatrix<Scalar>::from_lower(vm), std::move(t)};
}

/// Stepwise simulator; the initial state is drawn from the stationary law.
class Ar1Sampler {
 public:
  explicit Ar1Sampler(const Ar1Params<double>& params);

  Index dim() const { return x_.size(); }
  void start(Rng& rng);
  void step(Rng& rng);
  const Vector<double>& state() const { return x_; }

 private:
  Matrix<double> A_;
  Vector<double> theta_;
  Vector<double> mu_;
  Matrix<double> noise_factor_;       // chol(V)
  Matrix<double> stationary_factor_;  // chol(C)
  Vector<double> x_;
  Vector<double> z_;
};

/// n recorded states X_1..X_n, X_0 stationary; deterministic given the seed.
Chain ar1_simulate(const Ar1Params<double>& params, Index n, std::uint64_t seed);
Chain ar1_simulate(const Ar1Params<double>& params, Index n, Rng& rng);

// ---------------------------------------------------------------------------

template <typename Scalar>
void Ar1Params<Scalar>::validate() const {
  const Index d = p();
  if (d < 1 || A.rows() != d || A.cols() != d || V.dim() != d) {
    throw ShapeError("AR(1) parameters: A, V and theta dimensions disagree");
  }
  using std::abs;
  using std::max;
  const Matrix<Scalar> av = A * V.matrix();
  const Scalar scale = max(Scalar(1), av.cwiseAbs().maxCoeff());
  if ((av - av.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12) * scale) {
    throw Error("AR(1) parameters: A V is not symmetric, the chain would not be reversible");
  }
  if (!is_pd(V)) throw NotPositiveDefinite("AR(1) innovation covariance V is not positive definite");
  if (!(spectral_radius() < Scalar(1))) {
    throw Error("AR(1) parameters: spectral radius of A must be below 1");
  }
}

template <typename Scalar>
Scalar Ar1Params<Scalar>::spectral_radius() const {
  Eigen::LLT<Matrix<Scalar>> llt(V.matrix());
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("V is not positive definite");
  const Matrix<Scalar> l = llt.matrixL();
  const Matrix<Scalar> similar = llt.matrixL().solve(A * l);
  const Vector<Scalar> ev = eigenvalues_sym(SymMatrix<Scalar>::symmetric_part(similar));
  using std::abs;
  using std::max;
  return max(abs(ev(0)), abs(ev(ev.size() - 1)));
}

template <typename Scalar>
Ar1Truth<Scalar>::Ar1Truth(const Ar1Params<Scalar>& params, LagFormula formula) : A_(params.A) {
  params.validate();
  const Index p = params.p();
  const Matrix<Scalar> eye = Matrix<Scalar>::Identity(p, p);
  const Matrix<Scalar> a2 = A_ * A_;

  Eigen::FullPivLU<Matrix<Scalar>> one_minus_a(eye - A_);
  if (!one_minus_a.isInvertible()) throw Error("AR(1) parameters: I - A is singular");
  mu_ = one_minus_a.solve(params.theta);

  const Matrix<Scalar> inv_one_minus_a2 = Eigen::FullPivLU<Matrix<Scalar>>(eye - a2).inverse();
  C_ = SymMatrix<Scalar>::symmetric_part(inv_one_minus_a2 * params.V.matrix());

  if (formula == LagFormula::Standard) {
    lag_step_ = A_;
    Sigma_ = SymMatrix<Scalar>::symmetric_part(
        (Scalar(2) * one_minus_a.inverse() - eye) * C_.matrix());
  } else {
    lag_step_ = a2;
    Sigma_ = SymMatrix<Scalar>::symmetric_part((Scalar(2) * inv_one_minus_a2 - eye) * C_.matrix());
  }
}

template <typename Scalar>
Matrix<Scalar> Ar1Truth<Scalar>::gamma(Index t) const {
  if (t < 0) throw RangeError("lag must be non-negative");
  Matrix<Scalar> g = C_.matrix();
  for (Index k = 0; k < t; ++k) g = lag_step_ * g;
  return g;
}

template <typename Scalar>
SymMatrix<Scalar> Ar1Truth<Scalar>::pair(Index i) const {
  const Matrix<Scalar> even = gamma(2 * i);
  return SymMatrix<Scalar>::symmetric_part(even + lag_step_ * even);
}

template <typename Scalar>
SymMatrix<Scalar> Ar1Truth<Scalar>::partial_sum(Index m) const {
  if (m < 0) throw RangeError("partial-sum index must be non-negative");
  SymMatrix<Scalar> s = -C_;
  for (Index i = 0; i <= m; ++i) s += Scalar(2) * pair(i);
  return s;
}

}  // namespace misest
