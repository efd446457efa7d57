#pragma once

#include <string_view>

#include "misest/acov.hpp"
#include "misest/chain.hpp"
#include "misest/symmat.hpp"

namespace misest {

enum class Method { Uis, Mk, Mis, MisAdj };

Method parse_method(std::string_view name);
std::string_view to_string(Method m);

/// Estimate of the asymptotic covariance matrix Sigma of sqrt(n)(mu_n - mu).
///
/// t_n == -1 marks a degenerate mK result: sigma is gamma_{n,0} and
/// `degenerate` is set. s_n is -1 for mK, which has no first-PD search.
template <typename Scalar>
struct MvEstimate {
  Method method = Method::Mis;
  SymMatrix<Scalar> sigma;
  Index s_n = -1;
  Index t_n = -1;
  /// log|det sigma|; with det_sign this is the signed determinant.
  Scalar logdet = Scalar(0);
  int det_sign = 0;
  bool pd = false;
  bool degenerate = false;
};

/// Univariate initial positive sequence estimate sigma^2_{pos,n}.
template <typename Scalar>
struct UvEstimate {
  Scalar sigma2 = Scalar(0);
  Index t_n = -1;
  bool degenerate = false;
};

/// Which pair index the mK positivity scan starts from.
enum class MkStart { Zero, One };

namespace detail {

template <typename Scalar>
struct SequenceTruncation {
  Index s_n = 0;
  Index t_n = 0;
  SymMatrix<Scalar> sigma_s;  // Sigma_{n,s_n}
  SymMatrix<Scalar> sigma_t;  // Sigma_{n,t_n}
  SignedLogDet<Scalar> det_t;
};

inline void require_pairs(Index n) {
  if (n < 2) throw ShapeError("estimators need a chain with n >= 2");
}

// First PD partial sum, then the maximal run of strictly increasing
// determinants starting there.
template <typename Scalar>
SequenceTruncation<Scalar> initial_sequence_truncation(LagPairSequence<Scalar>& seq) {
  require_pairs(seq.n());
  const Index last = seq.max_pair_index();
  SequenceTruncation<Scalar> r;
  SymMatrix<Scalar> sigma = -seq.gamma0() + Scalar(2) * seq.pair(0);
  Index m = 0;
  while (!is_pd(sigma)) {
    if (m == last) throw NoPositiveDefinitePartialSum(seq.n(), last);
    ++m;
    sigma += Scalar(2) * seq.pair(m);
  }
  r.s_n = m;
  r.sigma_s = sigma;
  SignedLogDet<Scalar> det = signed_logdet(sigma);
  while (m < last) {
    SymMatrix<Scalar> next = sigma + Scalar(2) * seq.pair(m + 1);
    const SignedLogDet<Scalar> next_det = signed_logdet(next);
    if (!(next_det > det)) break;
    sigma = std::move(next);
    det = next_det;
    ++m;
  }
  r.t_n = m;
  r.sigma_t = std::move(sigma);
  r.det_t = det;
  return r;
}

template <typename Scalar>
MvEstimate<Scalar> finish(Method method, SymMatrix<Scalar> sigma, Index s_n, Index t_n) {
  MvEstimate<Scalar> e;
  e.method = method;
  const Vector<Scalar> ev = eigenvalues_sym(sigma);
  const SignedLogDet<Scalar> d = signed_logdet_from_eigenvalues<Scalar>(ev);
  using std::abs;
  using std::max;
  e.pd = ev(0) > kPdTolerance<Scalar> * max(Scalar(1), abs(ev(ev.size() - 1)));
  e.logdet = d.log_abs;
  e.det_sign = d.sign;
  e.sigma = std::move(sigma);
  e.s_n = s_n;
  e.t_n = t_n;
  return e;
}

}  // namespace detail

/// mIS: Sigma_{n,t_n}, where s_n is the first index with Sigma_{n,s_n} PD and
/// t_n ends the run of strictly increasing |Sigma_{n,i}| that starts at s_n.
/// Throws NoPositiveDefinitePartialSum when no s_n exists.
template <typename Scalar>
MvEstimate<Scalar> mis(LagPairSequence<Scalar>& seq) {
  auto r = detail::initial_sequence_truncation(seq);
  return detail::finish(Method::Mis, std::move(r.sigma_t), r.s_n, r.t_n);
}

/// mISadj: Sigma_{n,s_n} + 2 sum_{i=s_n+1}^{t_n} Gamma^+_{n,i} with the mIS
/// truncation indices.
template <typename Scalar>
MvEstimate<Scalar> misadj(LagPairSequence<Scalar>& seq) {
  auto r = detail::initial_sequence_truncation(seq);
  SymMatrix<Scalar> sigma = std::move(r.sigma_s);
  for (Index i = r.s_n + 1; i <= r.t_n; ++i) sigma += Scalar(2) * positive_part(seq.pair(i));
  return detail::finish(Method::MisAdj, std::move(sigma), r.s_n, r.t_n);
}

/// mK: Sigma_{n,t_n} with t_n the last index of the run of pair matrices
/// whose smallest eigenvalue is strictly positive. With MkStart::Zero a
/// non-PD Gamma_{n,0} yields a degenerate result (t_n = -1, sigma = gamma_{n,0}).
template <typename Scalar>
MvEstimate<Scalar> mk(LagPairSequence<Scalar>& seq, MkStart start = MkStart::Zero) {
  detail::require_pairs(seq.n());
  const Index last = seq.max_pair_index();
  const Index first = start == MkStart::Zero ? 0 : 1;
  Index t = first - 1;
  while (t < last && eigenvalues_sym(seq.pair(t + 1))(0) > Scalar(0)) ++t;
  if (t < 0) {
    auto e = detail::finish(Method::Mk, seq.gamma0(), -1, -1);
    e.degenerate = true;
    return e;
  }
  return detail::finish(Method::Mk, seq.partial_sum(t), -1, t);
}

/// Geyer's initial positive sequence on component j of the sequence:
/// t_n is the last index of the run Gamma_{n,i}(j,j) > 0, i = 0, 1, ...
/// A non-positive Gamma_{n,0} gives a degenerate result with sigma2 = gamma_{n,0}.
template <typename Scalar>
UvEstimate<Scalar> uis_component(LagPairSequence<Scalar>& seq, Index j) {
  detail::require_pairs(seq.n());
  if (j < 0 || j >= seq.p()) throw RangeError("component index out of range");
  const Index last = seq.max_pair_index();
  UvEstimate<Scalar> u;
  Index t = -1;
  while (t < last && seq.pair(t + 1)(j, j) > Scalar(0)) ++t;
  u.t_n = t;
  if (t < 0) {
    u.degenerate = true;
    u.sigma2 = seq.gamma0()(j, j);
    return u;
  }
  Scalar s = -seq.gamma0()(j, j) + Scalar(2) * seq.pair(0)(j, j);
  for (Index i = 1; i <= t; ++i) s += Scalar(2) * seq.pair(i)(j, j);
  u.sigma2 = s;
  return u;
}

/// uIS on a univariate series (p must be 1).
template <typename Scalar>
UvEstimate<Scalar> uis(const BasicChain<Scalar>& series) {
  if (series.p() != 1) throw ShapeError("uis expects a univariate series (p = 1)");
  LagPairSequence<Scalar> seq(series);
  return uis_component(seq, 0);
}

template <typename Scalar>
MvEstimate<Scalar> mis(const BasicChain<Scalar>& chain) {
  LagPairSequence<Scalar> seq(chain);
  return mis(seq);
}

template <typename Scalar>
MvEstimate<Scalar> misadj(const BasicChain<Scalar>& chain) {
  LagPairSequence<Scalar> seq(chain);
  return misadj(seq);
}

template <typename Scalar>
MvEstimate<Scalar> mk(const BasicChain<Scalar>& chain, MkStart start = MkStart::Zero) {
  LagPairSequence<Scalar> seq(chain);
  return mk(seq, start);
}

}  // namespace misest
