#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string_view>

#include <json.hpp>

#include "misest/chain.hpp"
#include "misest/rng.hpp"

namespace misest {

enum class Model { Ar1, Logistic, RandomEffects };

Model parse_model(std::string_view name);
std::string_view to_string(Model model);

/// A seeded chain generator built from a JSON parameter block.
///
/// Parameter schemas:
///   ar1:      {} or {"fixture": "hadamard", "p": 12}
///             | {"a": 0.5, "v": 1, "theta": 1}
///             | {"A": [[...]], "V": [[...]], "theta": [...]}
///   logistic: {"data": "file.csv" | "data_seed": s, "step_sd": 0.3, "burn_in": 1000}
///   ranef:    {"K": 2, "y": [...] | "data_seed": s, "burn_in": 1000,
///              "a1".."a3", "b1".."b3", "m0", "v0" (optional overrides)}
class ChainModel {
 public:
  virtual ~ChainModel() = default;

  virtual Index dim() const = 0;
  /// Closed-form stationary mean, when one exists.
  virtual std::optional<Vector<double>> analytic_mean() const = 0;
  /// Runs the sampler (including any burn-in) and calls visit on each of the
  /// n recorded states, in order.
  virtual void stream(Index n, Rng& rng, const std::function<void(const Vector<double>&)>& visit) const = 0;

  Chain simulate(Index n, Rng& rng) const;
};

std::unique_ptr<ChainModel> make_model(Model model, const nlohmann::json& params);

}  // namespace misest
