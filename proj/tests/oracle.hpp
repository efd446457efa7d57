#pragma once

// Direct double-loop evaluations used as independent references. Nothing
// here calls the library under test.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Mat = Eigen::MatrixXd;

inline double max_abs_diff(const Mat& a, const Mat& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

// (1/n) sum_{i<n-t} (x_i - m)(x_{i+t} - m)^T
inline Mat autocov(const Mat& x, Eigen::Index t) {
  const Eigen::Index n = x.rows(), p = x.cols();
  std::vector<double> mean(static_cast<std::size_t>(p), 0.0);
  for (Eigen::Index j = 0; j < p; ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) s += x(i, j);
    mean[static_cast<std::size_t>(j)] = s / static_cast<double>(n);
  }
  Mat g(p, p);
  for (Eigen::Index a = 0; a < p; ++a) {
    for (Eigen::Index b = 0; b < p; ++b) {
      double s = 0.0;
      for (Eigen::Index i = 0; i + t < n; ++i) {
        s += (x(i, a) - mean[static_cast<std::size_t>(a)]) * (x(i + t, b) - mean[static_cast<std::size_t>(b)]);
      }
      g(a, b) = s / static_cast<double>(n);
    }
  }
  return g;
}

inline Mat sym(const Mat& g) {
  Mat s(g.rows(), g.cols());
  for (Eigen::Index a = 0; a < g.rows(); ++a)
    for (Eigen::Index b = 0; b < g.cols(); ++b) s(a, b) = 0.5 * (g(a, b) + g(b, a));
  return s;
}

inline Mat pair(const Mat& x, Eigen::Index i) { return sym(autocov(x, 2 * i)) + sym(autocov(x, 2 * i + 1)); }

inline Mat partial_sum(const Mat& x, Eigen::Index m) {
  Mat s = -autocov(x, 0);
  for (Eigen::Index i = 0; i <= m; ++i) s += 2.0 * pair(x, i);
  return s;
}

}  // namespace oracle
