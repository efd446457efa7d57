#pragma once

#include <Eigen/Dense>

namespace misest {

/// Hadamard matrix of order p: entries +-1 and H H^T = p I.
///
/// Powers of two use the Sylvester doubling; p = 12 uses the Paley type-I
/// construction from the quadratic residues mod 11. Other orders throw RangeError.
Eigen::MatrixXi hadamard(int p);

}  // namespace misest
