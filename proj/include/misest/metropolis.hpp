#pragma once

#include <cmath>
#include <utility>

#include "misest/rng.hpp"

namespace misest {

/// One Metropolis update with a symmetric proposal. `x` and its cached log
/// target are replaced on acceptance; returns whether the move was accepted.
template <class State, class LogTarget, class Propose>
bool metropolis_step(Rng& rng, State& x, double& log_target_x, LogTarget&& log_target,
                     Propose&& propose) {
  State y = propose(rng, x);
  const double log_target_y = log_target(y);
  if (std::log(rng.uniform()) < log_target_y - log_target_x) {
    x = std::move(y);
    log_target_x = log_target_y;
    return true;
  }
  return false;
}

}  // namespace misest
