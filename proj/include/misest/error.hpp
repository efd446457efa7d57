#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace misest {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Declared and actual shapes disagree, or an argument has the wrong dimension.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An index (lag, pair index, partial-sum index) is outside its valid range.
class RangeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A chain entry is NaN or infinite.
class NonFiniteEntry : public Error {
 public:
  NonFiniteEntry(std::int64_t row, std::int64_t col)
      : Error("non-finite entry at row " + std::to_string(row) + ", column " +
              std::to_string(col)),
        row_(row),
        col_(col) {}

  std::int64_t row() const { return row_; }
  std::int64_t col() const { return col_; }

 private:
  std::int64_t row_;
  std::int64_t col_;
};

/// The symmetric eigen-iteration did not converge.
class EigenFailure : public Error {
 public:
  explicit EigenFailure(double max_offdiag_residual)
      : Error("symmetric eigendecomposition did not converge (max off-diagonal residual " +
              std::to_string(max_offdiag_residual) + ")"),
        residual_(max_offdiag_residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// No partial sum Sigma_{n,m}, 0 <= m <= floor(n/2 - 1), is positive definite.
/// The chain is too short for the multivariate initial sequence estimators.
class NoPositiveDefinitePartialSum : public Error {
 public:
  NoPositiveDefinitePartialSum(std::int64_t n, std::int64_t last_index)
      : Error("no positive definite partial sum for n = " + std::to_string(n) +
              " (searched indices 0.." + std::to_string(last_index) + ")") {}
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace misest
