#pragma once

// 160-bit binary float usable as an Eigen scalar. Boost's own Eigen glue
// does not build against Eigen 3.4, so the traits are spelled out here.

#include <limits>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace misest::testing {

using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<160>,
                                           boost::multiprecision::et_off>;

}  // namespace misest::testing

namespace Eigen {

template <>
struct NumTraits<misest::testing::Real> : GenericNumTraits<misest::testing::Real> {
  using Real = misest::testing::Real;
  using NonInteger = Real;
  using Nested = Real;
  using Literal = Real;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 4,
    MulCost = 8
  };
  static int digits10() { return std::numeric_limits<Real>::digits10; }
  static Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
  static Real dummy_precision() { return Real(1e-40); }
  static Real highest() { return (std::numeric_limits<Real>::max)(); }
  static Real lowest() { return std::numeric_limits<Real>::lowest(); }
  static Real infinity() { return std::numeric_limits<Real>::infinity(); }
  static Real quiet_NaN() { return std::numeric_limits<Real>::quiet_NaN(); }
};

}  // namespace Eigen
