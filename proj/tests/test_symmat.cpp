#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "misest/symmat.hpp"

using namespace misest;
using Sym = SymMatrix<double>;

namespace {

Sym sym2(double a, double b, double c) {
  Matrix<double> m(2, 2);
  m << a, b, b, c;
  return Sym::from_lower(m);
}

Sym random_sym(Rng& rng, Index p) {
  return Sym::symmetric_part(misest::testing::gaussian_matrix(rng, p, p));
}

Sym random_psd(Rng& rng, Index p, Index rank) {
  const Matrix<double> g = misest::testing::gaussian_matrix(rng, p, rank);
  return Sym::symmetric_part(g * g.transpose());
}

double max_abs(const Matrix<double>& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("constructors are exactly symmetric") {
  Matrix<double> m(3, 3);
  m << 1, 9, 9, 2, 3, 9, 4, 5, 6;
  const Sym a = Sym::from_lower(m);
  CHECK(a(0, 1) == 2.0);
  CHECK(a(1, 0) == 2.0);
  CHECK(a(0, 2) == 4.0);
  CHECK(a.matrix() == a.matrix().transpose());

  Rng rng(1);
  const Sym b = random_sym(rng, 7);
  CHECK(b.matrix() == b.matrix().transpose());
  const Sym c = 0.3 * b - b * 0.7 + Sym::identity(7);
  CHECK(c.matrix() == c.matrix().transpose());
  CHECK_THROWS_AS(a + b, ShapeError);
  CHECK_THROWS_AS(b - a, ShapeError);

  CHECK_THROWS_AS(Sym::from_lower(Matrix<double>(2, 3)), ShapeError);
  Matrix<double> bad = Matrix<double>::Zero(2, 2);
  bad(1, 0) = NAN;
  CHECK_THROWS_AS(Sym::from_lower(bad), NonFiniteEntry);
}

TEST_CASE("eigen_sym examples") {
  const Spectrum<double> id = eigen_sym(Sym::identity(2));
  CHECK(id.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(id.eigenvalues(1) == doctest::Approx(1.0));
  CHECK(max_abs(id.eigenvectors.transpose() * id.eigenvectors - Matrix<double>::Identity(2, 2)) < 1e-12);

  const Spectrum<double> d = eigen_sym(sym2(3, 0, -1));
  CHECK(d.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(d.eigenvalues(1) == doctest::Approx(3.0));

  const Spectrum<double> s = eigen_sym(sym2(2, 1, 2));
  CHECK(s.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.eigenvalues(1) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("spectrum reconstruction and orthonormality, p up to 65") {
  Rng rng(2024);
  for (Index p : {1, 2, 3, 8, 12, 33, 65}) {
    for (int rep = 0; rep < 3; ++rep) {
      const Sym m = random_sym(rng, p);
      const Spectrum<double> s = eigen_sym(m);
      for (Index k = 1; k < p; ++k) CHECK(s.eigenvalues(k - 1) <= s.eigenvalues(k));
      const Matrix<double> q = s.eigenvectors;
      CHECK(max_abs(q.transpose() * q - Matrix<double>::Identity(p, p)) <= 1e-10);
      const Matrix<double> back = q * s.eigenvalues.asDiagonal() * q.transpose();
      CHECK(max_abs(back - m.matrix()) <= 1e-10 * std::max(1.0, max_abs(m.matrix())));
      const Vector<double> ev = eigenvalues_sym(m);
      CHECK(max_abs(ev - s.eigenvalues) <= 1e-10 * std::max(1.0, max_abs(m.matrix())));
    }
  }
}

TEST_CASE("is_pd examples") {
  CHECK(is_pd(Sym::identity(3)));
  CHECK_FALSE(is_pd(sym2(1, 0, 0)));
  CHECK_FALSE(is_pd(sym2(1, 2, 1)));
  // relative threshold: tiny but positive eigenvalue against a large one
  CHECK_FALSE(is_pd(sym2(1e6, 0, 1e-9)));
  CHECK(is_pd(sym2(1e6, 0, 1e-3)));
  CHECK(is_pd(sym2(1e-9, 0, 1e-9)));
  CHECK(is_pd(sym2(1, 0, 1), 0.5));
  CHECK_FALSE(is_pd(sym2(1, 0, 0.4), 0.5));
}

TEST_CASE("logdet_pd examples") {
  CHECK(logdet_pd(Sym::identity(4)) == doctest::Approx(0.0));
  CHECK(logdet_pd(sym2(2, 0, 3)) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
  CHECK(logdet_pd(sym2(2, 1, 2)) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(logdet_pd(sym2(1, 2, 1)), NotPositiveDefinite);
  CHECK_THROWS_AS(logdet_pd(sym2(1, 0, 0)), NotPositiveDefinite);
}

TEST_CASE("logdet agrees with the determinant") {
  Rng rng(77);
  for (Index p : {1, 2, 5, 10}) {
    const Sym m = random_psd(rng, p, p + 3) + Sym::identity(p);
    const double det = m.matrix().determinant();
    CHECK(std::exp(logdet_pd(m)) == doctest::Approx(det).epsilon(1e-8));
  }
}

TEST_CASE("signed determinants order like their values") {
  const SignedLogDet<double> neg_big = signed_logdet(sym2(-2, 0, 3));   // -6
  const SignedLogDet<double> neg_small = signed_logdet(sym2(-1, 0, 1));  // -1
  const SignedLogDet<double> zero = signed_logdet(sym2(1, 0, 0));
  const SignedLogDet<double> pos = signed_logdet(sym2(2, 0, 3));  // 6
  CHECK(neg_big.sign == -1);
  CHECK(neg_big.log_abs == doctest::Approx(std::log(6.0)));
  CHECK(zero.sign == 0);
  CHECK(neg_small > neg_big);
  CHECK_FALSE(neg_big > neg_small);
  CHECK(zero > neg_small);
  CHECK(pos > zero);
  CHECK_FALSE(pos > pos);
  CHECK_FALSE(zero > zero);
}

TEST_CASE("positive_part examples") {
  const Sym a = positive_part(sym2(1, 0, -2));
  CHECK(max_abs(a.matrix() - sym2(1, 0, 0).matrix()) < 1e-14);
  CHECK(positive_part(Sym::identity(2)) == Sym::identity(2));
  const Sym b = positive_part(sym2(0, 1, 0));
  CHECK(max_abs(b.matrix() - sym2(0.5, 0.5, 0.5).matrix()) < 1e-14);
}

TEST_CASE("positive_part properties") {
  Rng rng(3);
  for (Index p : {1, 2, 4, 9, 20}) {
    for (int rep = 0; rep < 4; ++rep) {
      const Sym m = random_sym(rng, p);
      const Sym plus = positive_part(m);
      const double scale = std::max(1.0, max_abs(m.matrix()));
      CHECK(eigenvalues_sym(plus)(0) >= -1e-12 * scale);
      CHECK(eigenvalues_sym(plus - m)(0) >= -1e-12 * scale);
      const Sym twice = positive_part(plus);
      CHECK(max_abs(twice.matrix() - plus.matrix()) <= 1e-12 * scale);
    }
    // PSD input comes back untouched
    const Sym psd = random_psd(rng, p, p + 1);
    if (eigenvalues_sym(psd)(0) >= 0.0) CHECK(positive_part(psd) == psd);
  }
}

TEST_CASE("ordering of eigenvalues and determinants under a PD difference") {
  Rng rng(11);
  for (int rep = 0; rep < 30; ++rep) {
    const Index p = 1 + static_cast<Index>(rng.below(6));
    const Sym b = random_psd(rng, p, p);
    const Sym a = b + random_psd(rng, p, p) + 0.01 * Sym::identity(p);
    REQUIRE(is_pd(a - b));
    const Vector<double> la = eigenvalues_sym(a);
    const Vector<double> lb = eigenvalues_sym(b);
    for (Index k = 0; k < p; ++k) CHECK(la(k) > lb(k));
    CHECK(signed_logdet(a) > signed_logdet(b));
  }
}
