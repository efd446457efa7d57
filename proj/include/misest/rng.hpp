#pragma once

#include <cstdint>
#include <random>

namespace misest {

/// Seedable, splittable pseudo-random source.
///
/// The engine is MT19937-64, whose output sequence is fixed by the C++
/// standard, seeded with a SplitMix64-mixed seed. Uniform, normal and gamma
/// variates are produced by the transforms in rng.cpp rather than by
/// <random> distributions, whose algorithms vary between standard libraries,
/// so a given (seed, call sequence) yields bit-identical draws everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream `index` derived from `master_seed`.
  static Rng stream(std::uint64_t master_seed, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal (Marsaglia polar method).
  double normal();
  /// Gamma with shape-rate parameterization: mean shape / rate.
  double gamma(double shape, double rate);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace misest
