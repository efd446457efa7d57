#include "misest/logistic.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "misest/chain_io.hpp"
#include "misest/metropolis.hpp"

namespace misest {

void LogisticData::validate() const {
  if (X.rows() != y.size() || X.rows() < 1 || X.cols() < 1) {
    throw ShapeError("logistic data: X and y shapes disagree");
  }
  if (!X.allFinite()) throw Error("logistic data: non-finite covariate");
  for (Index i = 0; i < y.size(); ++i) {
    if (y(i) != 0.0 && y(i) != 1.0) throw Error("logistic data: responses must be 0 or 1");
  }
}

LogisticData load_logistic_data(const std::filesystem::path& path) {
  // Same numeric csv layout as a chain: header row, then numbers.
  const Chain table = load_chain(path, ChainFormat::Csv);
  if (table.p() < 2) throw ShapeError("logistic data needs a response and at least one covariate");
  LogisticData d;
  d.y = table.values().col(0);
  const Index k = table.p() - 1;
  if (k == 4) {
    d.X.resize(table.n(), 5);
    d.X.col(0).setOnes();
    d.X.rightCols(4) = table.values().rightCols(4);
  } else {
    d.X = table.values().rightCols(k);
  }
  d.validate();
  return d;
}

void save_logistic_data(const LogisticData& data, const std::filesystem::path& path) {
  data.validate();
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << 'y';
  for (Index j = 0; j < data.coefficients(); ++j) out << ",x" << (j + 1);
  out << '\n';
  out.precision(17);
  for (Index i = 0; i < data.observations(); ++i) {
    out << data.y(i);
    for (Index j = 0; j < data.coefficients(); ++j) out << ',' << data.X(i, j);
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

Vector<double> synthetic_logistic_beta() {
  Vector<double> beta(5);
  beta << 0.5, 1.0, -0.5, 0.75, -1.0;
  return beta;
}

LogisticData synthetic_logistic_data(std::uint64_t seed) {
  constexpr Index kRows = 100;
  Rng rng(seed);
  const Vector<double> beta = synthetic_logistic_beta();
  LogisticData d;
  d.X.resize(kRows, 5);
  d.y.resize(kRows);
  for (Index i = 0; i < kRows; ++i) {
    d.X(i, 0) = 1.0;
    for (Index j = 1; j < 5; ++j) d.X(i, j) = rng.normal();
    const double eta = d.X.row(i).dot(beta);
    d.y(i) = rng.uniform() < 1.0 / (1.0 + std::exp(-eta)) ? 1.0 : 0.0;
  }
  return d;
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double log_posterior_logistic(const Vector<double>& beta, const LogisticData& data) {
  if (beta.size() != data.coefficients()) throw ShapeError("beta has the wrong dimension");
  const Vector<double> eta = data.X * beta;
  double s = 0.0;
  for (Index i = 0; i < eta.size(); ++i) s += data.y(i) * eta(i) - softplus(eta(i));
  return s - beta.squaredNorm() / 8.0;
}

Vector<double> log_posterior_logistic_gradient(const Vector<double>& beta, const LogisticData& data) {
  if (beta.size() != data.coefficients()) throw ShapeError("beta has the wrong dimension");
  const Vector<double> eta = data.X * beta;
  Vector<double> resid(eta.size());
  for (Index i = 0; i < eta.size(); ++i) {
    // logistic(eta) written to avoid overflow for large |eta|
    const double prob = eta(i) >= 0.0 ? 1.0 / (1.0 + std::exp(-eta(i)))
                                      : std::exp(eta(i)) / (1.0 + std::exp(eta(i)));
    resid(i) = data.y(i) - prob;
  }
  return data.X.transpose() * resid - beta / 4.0;
}

RwmLogistic::RwmLogistic(const LogisticData& data, double step_sd, Vector<double> beta0)
    : data_(&data), step_sd_(step_sd), beta_(std::move(beta0)) {
  if (!(step_sd > 0.0)) throw RangeError("step_sd must be positive");
  log_post_ = log_posterior_logistic(beta_, data);
}

void RwmLogistic::step(Rng& rng) {
  const auto propose = [this](Rng& r, const Vector<double>& x) {
    Vector<double> y(x.size());
    for (Index k = 0; k < x.size(); ++k) y(k) = x(k) + step_sd_ * r.normal();
    return y;
  };
  const auto target = [this](const Vector<double>& b) { return log_posterior_logistic(b, *data_); };
  ++steps_;
  if (metropolis_step(rng, beta_, log_post_, target, propose)) ++accepted_;
}

double RwmLogistic::acceptance_rate() const {
  return steps_ == 0 ? 0.0 : static_cast<double>(accepted_) / static_cast<double>(steps_);
}

RwmRun rwm_logistic(const LogisticData& data, double step_sd, Index n, Rng& rng, Index burn_in) {
  if (n < 1) throw RangeError("chain length must be positive");
  data.validate();
  RwmLogistic burn(data, step_sd, Vector<double>::Zero(data.coefficients()));
  for (Index i = 0; i < burn_in; ++i) burn.step(rng);
  RwmLogistic sampler(data, step_sd, burn.state());
  Matrix<double> values(n, sampler.dim());
  for (Index i = 0; i < n; ++i) {
    sampler.step(rng);
    values.row(i) = sampler.state().transpose();
  }
  return {Chain(std::move(values)), sampler.acceptance_rate()};
}

RwmRun rwm_logistic(const LogisticData& data, double step_sd, Index n, std::uint64_t seed,
                    Index burn_in) {
  Rng rng(seed);
  return rwm_logistic(data, step_sd, n, rng, burn_in);
}

}  // namespace misest
