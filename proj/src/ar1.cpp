#include "misest/ar1.hpp"

namespace misest {

namespace {

Matrix<double> cholesky_factor(const SymMatrix<double>& m, const char* what) {
  Eigen::LLT<Matrix<double>> llt(m.matrix());
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite(std::string(what) + " is not positive definite");
  return llt.matrixL();
}

}  // namespace

Ar1Sampler::Ar1Sampler(const Ar1Params<double>& params)
    : A_(params.A), theta_(params.theta), z_(params.p()) {
  const Ar1Truth<double> truth(params);
  mu_ = truth.mu();
  noise_factor_ = cholesky_factor(params.V, "V");
  stationary_factor_ = cholesky_factor(truth.C(), "stationary covariance");
  x_ = mu_;
}

void Ar1Sampler::start(Rng& rng) {
  for (Index k = 0; k < z_.size(); ++k) z_(k) = rng.normal();
  x_ = mu_ + stationary_factor_ * z_;
}

void Ar1Sampler::step(Rng& rng) {
  for (Index k = 0; k < z_.size(); ++k) z_(k) = rng.normal();
  x_ = A_ * x_ + theta_ + noise_factor_ * z_;
}

Chain ar1_simulate(const Ar1Params<double>& params, Index n, Rng& rng) {
  if (n < 1) throw RangeError("chain length must be positive");
  Ar1Sampler sampler(params);
  sampler.start(rng);
  Matrix<double> values(n, params.p());
  for (Index i = 0; i < n; ++i) {
    sampler.step(rng);
    values.row(i) = sampler.state().transpose();
  }
  return Chain(std::move(values));
}

Chain ar1_simulate(const Ar1Params<double>& params, Index n, std::uint64_t seed) {
  Rng rng(seed);
  return ar1_simulate(params, n, rng);
}

}  // namespace misest
