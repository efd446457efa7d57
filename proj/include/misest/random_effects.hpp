#pragma once

#include <cstdint>

#include "misest/chain.hpp"
#include "misest/rng.hpp"

namespace misest {

/// Hyperparameters of the one-way random effects model
///
///   y_i | theta_i, gamma_i       ~ N(theta_i, 1 / gamma_i)
///   theta_i | mu, l_theta, l_i   ~ N(mu, 1 / (l_theta l_i))
///   mu ~ N(m0, 1 / v0), gamma_i ~ G(a3, b3), l_theta ~ G(a1, b1), l_i ~ G(a2, b2)
///
/// Gamma laws use the shape-rate parameterization (mean a / b).
struct RandomEffectsHyper {
  double a1 = 0.1;
  double a2 = 0.1;
  double a3 = 1.5;
  double b1 = 0.1;
  double b2 = 0.1;
  double b3 = 1.5;
  double m0 = 0.0;
  double v0 = 0.001;

  void validate() const;
};

struct RandomEffectsState {
  Vector<double> theta;
  double mu = 0.0;
  double lambda_theta = 1.0;
  Vector<double> lambda;
  Vector<double> gamma;

  /// (theta_1..theta_K, mu, lambda_theta, lambda_1..lambda_K, gamma_1..gamma_K); length 3K + 2.
  Vector<double> flatten() const;
};

/// Random-scan Gibbs sampler: each step redraws one of the four blocks
/// (lambda_theta, lambda, gamma, xi = (theta, mu)) chosen with probability 1/4
/// from its full conditional.
class RandomEffectsGibbs {
 public:
  /// Starts at theta = y, mu = mean(y), all precisions 1.
  RandomEffectsGibbs(Vector<double> y, RandomEffectsHyper hyper);
  RandomEffectsGibbs(Vector<double> y, RandomEffectsHyper hyper, RandomEffectsState init);

  Index groups() const { return y_.size(); }
  Index dim() const { return 3 * groups() + 2; }

  /// lambda_theta ~ G(a1 + K/2, b1 + sum_i lambda_i (theta_i - mu)^2 / 2).
  void update_lambda_theta(Rng& rng);
  /// lambda_i ~ G(a2 + 1/2, b2 + lambda_theta (theta_i - mu)^2 / 2), independently.
  void update_lambda(Rng& rng);
  /// gamma_i ~ G(a3 + 1/2, b3 + (y_i - theta_i)^2 / 2), independently.
  void update_gamma(Rng& rng);
  /// (theta, mu) jointly normal with an arrow-shaped precision matrix.
  void update_xi(Rng& rng);

  void step(Rng& rng);

  const RandomEffectsState& parameters() const { return s_; }
  Vector<double> state() const { return s_.flatten(); }

 private:
  Vector<double> y_;
  RandomEffectsHyper h_;
  RandomEffectsState s_;
};

/// Synthetic data: theta_i ~ N(0, 1), y_i ~ N(theta_i, 1).
Vector<double> synthetic_random_effects_data(Index K, std::uint64_t seed);

/// Runs `burn_in` discarded steps from the default start, then records n states.
Chain gibbs_random_effects(const Vector<double>& y, const RandomEffectsHyper& hyper, Index n,
                           std::uint64_t seed, Index burn_in = 0);
Chain gibbs_random_effects(const Vector<double>& y, const RandomEffectsHyper& hyper, Index n,
                           Rng& rng, Index burn_in = 0);

}  // namespace misest
