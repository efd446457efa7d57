#pragma once

#include <string_view>
#include <vector>

#include "misest/acov.hpp"
#include "misest/chain.hpp"
#include "misest/symmat.hpp"

namespace misest {

// Distribution functions, accurate to about 1e-12 (cdf) and 1e-10 (quantile).
double std_normal_cdf(double x);
double std_normal_quantile(double prob);
/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);
double chisq_cdf(double x, double dof);
double chisq_quantile(double prob, double dof);

/// Lambda_n = gamma_{n,0}, the divisor-n sample covariance.
SymMatrix<double> sample_cov(const Chain& chain);

/// n (|lambda| / |sigma|)^(1/p), evaluated through log-determinants.
double ess(Index n, const SymMatrix<double>& lambda, const SymMatrix<double>& sigma);

struct UnivariateEss {
  double min_ess = 0.0;
  /// Component attaining the minimum; -1 if every component was excluded.
  Index argmin = -1;
  /// Components whose uIS estimate was degenerate or non-positive.
  std::vector<Index> excluded;
};

/// Minimum over components of n gamma_{n,0}(i,i) / sigma^2_{pos,n}(i).
UnivariateEss min_univariate_ess(const Chain& chain);
UnivariateEss min_univariate_ess(LagPairSequence<double>& seq);

enum class RegionKind { Ellipsoid, Cube, BonferroniCube };

std::string_view to_string(RegionKind kind);
RegionKind parse_region_kind(std::string_view name);

/// Confidence region for mu centered at mu_n.
///
/// Ellipsoid: { x : n (c - x)^T sigma^{-1} (c - x) <= cutoff }, cutoff the
/// chi-square quantile. Cubes: |x_i - c_i| <= half_widths_i.
class Region {
 public:
  RegionKind kind() const { return kind_; }
  const Vector<double>& center() const { return center_; }
  Index dim() const { return center_.size(); }
  Index n() const { return n_; }
  double level() const { return level_; }
  /// chi-square quantile (ellipsoid) or z quantile (cubes).
  double cutoff() const { return cutoff_; }
  const Vector<double>& half_widths() const { return half_widths_; }
  /// Shape matrix sigma of an ellipsoid; empty for cubes.
  const SymMatrix<double>& shape() const { return shape_; }

  double log_volume() const { return log_volume_; }
  double volume() const;
  /// volume^(1/p).
  double volume_root() const;

  /// n (c - x)^T sigma^{-1} (c - x); ellipsoids only.
  double quadratic_form(const Vector<double>& x) const;
  bool contains(const Vector<double>& x) const;

  friend Region ellipsoid_region(const Vector<double>&, const SymMatrix<double>&, Index, double);
  friend Region cube_region(const Vector<double>&, const Vector<double>&, Index, double, bool);

 private:
  Region() = default;

  RegionKind kind_ = RegionKind::Ellipsoid;
  Vector<double> center_;
  Index n_ = 0;
  double level_ = 0.0;
  double cutoff_ = 0.0;
  double log_volume_ = 0.0;
  Vector<double> half_widths_;
  SymMatrix<double> shape_;
  Eigen::LLT<Matrix<double>> factor_;
};

/// 100(1 - alpha)% ellipsoid from a PD estimate of Sigma.
Region ellipsoid_region(const Vector<double>& mu_n, const SymMatrix<double>& sigma, Index n,
                        double alpha);

/// Per-component intervals mu_n(i) +- z sigma_n(i) / sqrt(n) with
/// z = z_{1-alpha/2}, or z_{1-alpha/(2p)} when bonferroni is set.
Region cube_region(const Vector<double>& mu_n, const Vector<double>& sigma_diag, Index n,
                   double alpha, bool bonferroni);

}  // namespace misest
