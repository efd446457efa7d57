#include "misest/random_effects.hpp"

#include <cmath>

namespace misest {

void RandomEffectsHyper::validate() const {
  if (!(a1 > 0 && a2 > 0 && a3 > 0 && b1 > 0 && b2 > 0 && b3 > 0 && v0 > 0) || !std::isfinite(m0)) {
    throw RangeError("random effects hyperparameters a1..a3, b1..b3 and v0 must be positive");
  }
}

Vector<double> RandomEffectsState::flatten() const {
  const Index k = theta.size();
  Vector<double> out(3 * k + 2);
  out << theta, mu, lambda_theta, lambda, gamma;
  return out;
}

namespace {

RandomEffectsState default_start(const Vector<double>& y) {
  RandomEffectsState s;
  s.theta = y;
  s.mu = y.mean();
  s.lambda_theta = 1.0;
  s.lambda = Vector<double>::Ones(y.size());
  s.gamma = Vector<double>::Ones(y.size());
  return s;
}

}  // namespace

RandomEffectsGibbs::RandomEffectsGibbs(Vector<double> y, RandomEffectsHyper hyper)
    : RandomEffectsGibbs(y, hyper, default_start(y)) {}

RandomEffectsGibbs::RandomEffectsGibbs(Vector<double> y, RandomEffectsHyper hyper,
                                       RandomEffectsState init)
    : y_(std::move(y)), h_(hyper), s_(std::move(init)) {
  h_.validate();
  const Index k = y_.size();
  if (k < 1) throw ShapeError("random effects model needs K >= 1 observations");
  if (!y_.allFinite()) throw Error("random effects data must be finite");
  if (s_.theta.size() != k || s_.lambda.size() != k || s_.gamma.size() != k) {
    throw ShapeError("initial state does not match the number of groups");
  }
  if (!(s_.lambda_theta > 0) || !(s_.lambda.array() > 0).all() || !(s_.gamma.array() > 0).all()) {
    throw RangeError("initial precisions must be positive");
  }
}

void RandomEffectsGibbs::update_lambda_theta(Rng& rng) {
  const double k = static_cast<double>(groups());
  const double ss = (s_.lambda.array() * (s_.theta.array() - s_.mu).square()).sum();
  s_.lambda_theta = rng.gamma(h_.a1 + k / 2.0, h_.b1 + ss / 2.0);
}

void RandomEffectsGibbs::update_lambda(Rng& rng) {
  for (Index i = 0; i < groups(); ++i) {
    const double d = s_.theta(i) - s_.mu;
    s_.lambda(i) = rng.gamma(h_.a2 + 0.5, h_.b2 + s_.lambda_theta * d * d / 2.0);
  }
}

void RandomEffectsGibbs::update_gamma(Rng& rng) {
  for (Index i = 0; i < groups(); ++i) {
    const double d = y_(i) - s_.theta(i);
    s_.gamma(i) = rng.gamma(h_.a3 + 0.5, h_.b3 + d * d / 2.0);
  }
}

void RandomEffectsGibbs::update_xi(Rng& rng) {
  const Index k = groups();
  Matrix<double> precision = Matrix<double>::Zero(k + 1, k + 1);
  Vector<double> linear(k + 1);
  double mu_precision = h_.v0;
  for (Index i = 0; i < k; ++i) {
    const double w = s_.lambda_theta * s_.lambda(i);
    precision(i, i) = s_.gamma(i) + w;
    precision(i, k) = -w;
    precision(k, i) = -w;
    mu_precision += w;
    linear(i) = s_.gamma(i) * y_(i);
  }
  precision(k, k) = mu_precision;
  linear(k) = h_.v0 * h_.m0;

  Eigen::LLT<Matrix<double>> llt(precision);
  if (llt.info() != Eigen::Success) throw Error("xi full conditional precision is not positive definite");
  const Vector<double> mean = llt.solve(linear);
  Vector<double> z(k + 1);
  for (Index i = 0; i <= k; ++i) z(i) = rng.normal();
  // precision = L L^T, so L^{-T} z has covariance precision^{-1}.
  const Vector<double> draw = mean + llt.matrixU().solve(z);
  s_.theta = draw.head(k);
  s_.mu = draw(k);
}

void RandomEffectsGibbs::step(Rng& rng) {
  switch (rng.below(4)) {
    case 0:
      update_lambda_theta(rng);
      break;
    case 1:
      update_lambda(rng);
      break;
    case 2:
      update_gamma(rng);
      break;
    default:
      update_xi(rng);
      break;
  }
}

Vector<double> synthetic_random_effects_data(Index K, std::uint64_t seed) {
  if (K < 1) throw RangeError("K must be positive");
  Rng rng(seed);
  Vector<double> y(K);
  for (Index i = 0; i < K; ++i) {
    const double theta = rng.normal();
    y(i) = theta + rng.normal();
  }
  return y;
}

Chain gibbs_random_effects(const Vector<double>& y, const RandomEffectsHyper& hyper, Index n,
                           Rng& rng, Index burn_in) {
  if (n < 1) throw RangeError("chain length must be positive");
  RandomEffectsGibbs sampler(y, hyper);
  for (Index i = 0; i < burn_in; ++i) sampler.step(rng);
  Matrix<double> values(n, sampler.dim());
  for (Index i = 0; i < n; ++i) {
    sampler.step(rng);
    values.row(i) = sampler.state().transpose();
  }
  return Chain(std::move(values));
}

Chain gibbs_random_effects(const Vector<double>& y, const RandomEffectsHyper& hyper, Index n,
                           std::uint64_t seed, Index burn_in) {
  Rng rng(seed);
  return gibbs_random_effects(y, hyper, n, rng, burn_in);
}

}  // namespace misest
