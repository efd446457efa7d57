#pragma once

#include <cstdint>
#include <filesystem>

#include "misest/chain.hpp"
#include "misest/rng.hpp"

namespace misest {

/// Binary responses y with a design matrix X (one row per observation).
struct LogisticData {
  Matrix<double> X;
  Vector<double> y;

  Index observations() const { return X.rows(); }
  Index coefficients() const { return X.cols(); }
  void validate() const;
};

/// CSV with header `y,x1,...,xk`. A file with exactly four covariates (the
/// layout of the classic `logit` data) gets an intercept column prepended,
/// giving five coefficients.
LogisticData load_logistic_data(const std::filesystem::path& path);
void save_logistic_data(const LogisticData& data, const std::filesystem::path& path);

inline constexpr std::uint64_t kSyntheticLogisticSeed = 20160612;

/// Coefficients used to generate the synthetic stand-in data set.
Vector<double> synthetic_logistic_beta();

/// 100 x 5 stand-in: column 1 is an intercept, columns 2-5 are iid N(0, 1),
/// y_i ~ Bernoulli(logistic(x_i^T beta)) with beta = synthetic_logistic_beta().
LogisticData synthetic_logistic_data(std::uint64_t seed = kSyntheticLogisticSeed);

/// Overflow-safe log(1 + e^x).
double softplus(double x);

/// sum_i [y_i x_i^T beta - softplus(x_i^T beta)] - |beta|^2 / 8 (prior N(0, 4 I)),
/// up to an additive constant.
double log_posterior_logistic(const Vector<double>& beta, const LogisticData& data);
Vector<double> log_posterior_logistic_gradient(const Vector<double>& beta, const LogisticData& data);

/// Random-walk Metropolis on the logistic posterior with N(0, step_sd^2 I) increments.
class RwmLogistic {
 public:
  RwmLogistic(const LogisticData& data, double step_sd, Vector<double> beta0);

  Index dim() const { return beta_.size(); }
  void step(Rng& rng);
  const Vector<double>& state() const { return beta_; }
  double acceptance_rate() const;

 private:
  const LogisticData* data_;
  double step_sd_;
  Vector<double> beta_;
  double log_post_;
  std::int64_t steps_ = 0;
  std::int64_t accepted_ = 0;
};

struct RwmRun {
  Chain chain;
  /// Acceptance rate over the recorded iterations.
  double acceptance_rate;
};

/// Starts at beta = 0, discards `burn_in` iterations, records n.
RwmRun rwm_logistic(const LogisticData& data, double step_sd, Index n, std::uint64_t seed,
                    Index burn_in = 0);
RwmRun rwm_logistic(const LogisticData& data, double step_sd, Index n, Rng& rng,
                    Index burn_in = 0);

}  // namespace misest
