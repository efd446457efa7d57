#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "misest/diagnostics.hpp"

namespace misest {

namespace {

void check_prob(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw RangeError("probability " + std::to_string(prob) + " outside (0, 1)");
  }
}

// Acklam's rational approximation, relative error ~1e-9 before refinement.
double acklam(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double low = 0.02425;
  if (p < low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - low) return -acklam(1.0 - p);
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Series expansion, valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < 10000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) (modified Lentz), valid for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double chisq_log_density(double x, double dof) {
  const double k = dof / 2.0;
  return (k - 1.0) * std::log(x) - x / 2.0 - k * std::numbers::ln2 - std::lgamma(k);
}

}  // namespace

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double std_normal_quantile(double prob) {
  check_prob(prob);
  double x = acklam(prob);
  // Halley refinement against the erfc-based cdf.
  for (int it = 0; it < 2; ++it) {
    const double e = std_normal_cdf(x) - prob;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
    x -= u / (1.0 + x * u / 2.0);
  }
  return x;
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw RangeError("gamma shape must be positive");
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double chisq_cdf(double x, double dof) { return regularized_gamma_p(dof / 2.0, x / 2.0); }

double chisq_quantile(double prob, double dof) {
  check_prob(prob);
  if (!(dof > 0.0)) throw RangeError("chi-square degrees of freedom must be positive");

  // Wilson-Hilferty start, then Newton steps kept inside a shrinking bracket.
  const double h = 2.0 / (9.0 * dof);
  const double z = std_normal_quantile(prob);
  double x = dof * std::pow(std::max(1.0 - h + z * std::sqrt(h), 0.1), 3.0);
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    const double f = chisq_cdf(x, dof) - prob;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = x - f / std::exp(chisq_log_density(x, dof));
    if (!(next > lo && next < hi)) next = std::isinf(hi) ? 2.0 * x + 1.0 : 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-14 * std::max(1.0, x)) return next;
    x = next;
  }
  return x;
}

}  // namespace misest
