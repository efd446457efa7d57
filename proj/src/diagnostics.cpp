#include "misest/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "misest/acov.hpp"
#include "misest/estimators.hpp"

namespace misest {

SymMatrix<double> sample_cov(const Chain& chain) { return LagPairSequence<double>(chain).gamma0(); }

double ess(Index n, const SymMatrix<double>& lambda, const SymMatrix<double>& sigma) {
  if (lambda.dim() != sigma.dim()) throw ShapeError("ess: lambda and sigma dimensions differ");
  const double p = static_cast<double>(sigma.dim());
  return static_cast<double>(n) * std::exp((logdet_pd(lambda) - logdet_pd(sigma)) / p);
}

UnivariateEss min_univariate_ess(LagPairSequence<double>& seq) {
  UnivariateEss out;
  out.min_ess = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < seq.p(); ++j) {
    const UvEstimate<double> u = uis_component(seq, j);
    if (u.degenerate || !(u.sigma2 > 0.0)) {
      out.excluded.push_back(j);
      continue;
    }
    const double e = static_cast<double>(seq.n()) * seq.gamma0()(j, j) / u.sigma2;
    if (e < out.min_ess) {
      out.min_ess = e;
      out.argmin = j;
    }
  }
  if (out.argmin < 0) out.min_ess = std::numeric_limits<double>::quiet_NaN();
  return out;
}

UnivariateEss min_univariate_ess(const Chain& chain) {
  LagPairSequence<double> seq(chain);
  return min_univariate_ess(seq);
}

std::string_view to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::Ellipsoid:
      return "ellipsoid";
    case RegionKind::Cube:
      return "cube";
    case RegionKind::BonferroniCube:
      return "bonferroni";
  }
  return "?";
}

RegionKind parse_region_kind(std::string_view name) {
  if (name == "ellipsoid") return RegionKind::Ellipsoid;
  if (name == "cube") return RegionKind::Cube;
  if (name == "bonf" || name == "bonferroni" || name == "bonferroni-cube") {
    return RegionKind::BonferroniCube;
  }
  throw Error("unknown region kind '" + std::string(name) + "'");
}

double Region::volume() const { return std::exp(log_volume_); }

double Region::volume_root() const {
  return std::exp(log_volume_ / static_cast<double>(dim()));
}

double Region::quadratic_form(const Vector<double>& x) const {
  if (kind_ != RegionKind::Ellipsoid) throw Error("quadratic_form is defined for ellipsoids only");
  if (x.size() != dim()) throw ShapeError("point dimension differs from region dimension");
  const Vector<double> y = factor_.matrixL().solve(center_ - x);
  return static_cast<double>(n_) * y.squaredNorm();
}

bool Region::contains(const Vector<double>& x) const {
  if (x.size() != dim()) throw ShapeError("point dimension differs from region dimension");
  if (kind_ == RegionKind::Ellipsoid) return quadratic_form(x) <= cutoff_;
  return ((x - center_).cwiseAbs().array() <= half_widths_.array()).all();
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw RangeError("alpha must lie in (0, 1)");
}

}  // namespace

Region ellipsoid_region(const Vector<double>& mu_n, const SymMatrix<double>& sigma, Index n,
                        double alpha) {
  check_alpha(alpha);
  if (mu_n.size() != sigma.dim()) throw ShapeError("center and sigma dimensions differ");
  if (n < 1) throw RangeError("sample size must be positive");
  const double logdet = logdet_pd(sigma);

  Region r;
  r.kind_ = RegionKind::Ellipsoid;
  r.center_ = mu_n;
  r.n_ = n;
  r.level_ = 1.0 - alpha;
  const double p = static_cast<double>(mu_n.size());
  r.cutoff_ = chisq_quantile(1.0 - alpha, p);
  r.log_volume_ = 0.5 * p * std::log(std::numbers::pi) - std::lgamma(0.5 * p + 1.0) +
                  0.5 * p * std::log(r.cutoff_ / static_cast<double>(n)) + 0.5 * logdet;
  r.shape_ = sigma;
  r.factor_.compute(sigma.matrix());
  if (r.factor_.info() != Eigen::Success) {
    throw NotPositiveDefinite("Cholesky factorization of sigma failed");
  }
  return r;
}

Region cube_region(const Vector<double>& mu_n, const Vector<double>& sigma_diag, Index n,
                   double alpha, bool bonferroni) {
  check_alpha(alpha);
  if (mu_n.size() != sigma_diag.size()) throw ShapeError("center and sigma dimensions differ");
  if (n < 1) throw RangeError("sample size must be positive");
  if (!(sigma_diag.array() > 0.0).all()) {
    throw RangeError("cube region needs strictly positive component standard deviations");
  }
  const double p = static_cast<double>(mu_n.size());
  const double tail = bonferroni ? alpha / (2.0 * p) : alpha / 2.0;
  const double z = std_normal_quantile(1.0 - tail);
  const double root_n = std::sqrt(static_cast<double>(n));

  Region r;
  r.kind_ = bonferroni ? RegionKind::BonferroniCube : RegionKind::Cube;
  r.center_ = mu_n;
  r.n_ = n;
  r.level_ = 1.0 - alpha;
  r.cutoff_ = z;
  r.half_widths_ = z * sigma_diag / root_n;
  r.log_volume_ = p * std::log(2.0 * z / root_n) + sigma_diag.array().log().sum();
  return r;
}

}  // namespace misest
