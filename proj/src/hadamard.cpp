#include "misest/hadamard.hpp"

#include <string>
#include <vector>

#include "misest/error.hpp"

namespace misest {

namespace {

Eigen::MatrixXi sylvester(int p) {
  Eigen::MatrixXi h = Eigen::MatrixXi::Ones(1, 1);
  while (h.rows() < p) {
    const Eigen::Index k = h.rows();
    Eigen::MatrixXi next(2 * k, 2 * k);
    next << h, h, h, -h;
    h = std::move(next);
  }
  return h;
}

// Paley I for a prime q = 3 (mod 4): H = I + S with S = [[0, 1^T], [-1, Q]],
// Q the Jacobsthal matrix Q_ij = chi(j - i).
Eigen::MatrixXi paley_type_one(int q) {
  std::vector<int> chi(static_cast<std::size_t>(q), -1);
  chi[0] = 0;
  for (int x = 1; x < q; ++x) chi[static_cast<std::size_t>((x * x) % q)] = 1;

  const int order = q + 1;
  Eigen::MatrixXi s = Eigen::MatrixXi::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    s(0, i) = 1;
    s(i, 0) = -1;
    for (int j = 1; j < order; ++j) s(i, j) = chi[static_cast<std::size_t>(((j - i) % q + q) % q)];
  }
  return Eigen::MatrixXi::Identity(order, order) + s;
}

}  // namespace

Eigen::MatrixXi hadamard(int p) {
  if (p >= 1 && (p & (p - 1)) == 0) return sylvester(p);
  if (p == 12) return paley_type_one(11);
  throw RangeError("unsupported Hadamard order " + std::to_string(p) +
                   " (supported: powers of two and 12)");
}

}  // namespace misest
