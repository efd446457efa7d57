#include "misest/models.hpp"

#include <string>

#include "misest/ar1.hpp"
#include "misest/logistic.hpp"
#include "misest/random_effects.hpp"

namespace misest {

using nlohmann::json;

Model parse_model(std::string_view name) {
  if (name == "ar1") return Model::Ar1;
  if (name == "logistic") return Model::Logistic;
  if (name == "ranef") return Model::RandomEffects;
  throw ConfigError("unknown model '" + std::string(name) + "' (expected ar1, logistic or ranef)");
}

std::string_view to_string(Model model) {
  switch (model) {
    case Model::Ar1:
      return "ar1";
    case Model::Logistic:
      return "logistic";
    case Model::RandomEffects:
      return "ranef";
  }
  return "?";
}

Chain ChainModel::simulate(Index n, Rng& rng) const {
  if (n < 1) throw RangeError("chain length must be positive");
  Matrix<double> values(n, dim());
  Index i = 0;
  stream(n, rng, [&](const Vector<double>& x) { values.row(i++) = x.transpose(); });
  return Chain(std::move(values));
}

namespace {

Matrix<double> matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(what) + " must be a non-empty array of rows");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j.at(0).size());
  Matrix<double> m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (static_cast<Index>(j.at(i).size()) != cols) throw ConfigError(std::string(what) + " rows differ in length");
    for (Index k = 0; k < cols; ++k) m(i, k) = j.at(i).at(k).get<double>();
  }
  return m;
}

Vector<double> vector_from_json(const json& j) {
  Vector<double> v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = j.at(i).get<double>();
  return v;
}

Ar1Params<double> ar1_params_from_json(const json& p) {
  if (p.empty() || p.contains("fixture")) {
    if (p.value("fixture", "hadamard") != "hadamard") throw ConfigError("unknown ar1 fixture");
    return ar1_hadamard_fixture<double>(p.value("p", 12));
  }
  if (p.contains("a")) {
    return ar1_scalar<double>(p.at("a").get<double>(), p.value("v", 1.0), p.value("theta", 1.0));
  }
  if (p.contains("A")) {
    Ar1Params<double> out{matrix_from_json(p.at("A"), "A"),
                          SymMatrix<double>::from_lower(matrix_from_json(p.at("V"), "V")),
                          vector_from_json(p.at("theta"))};
    return out;
  }
  throw ConfigError("ar1 parameters need one of 'fixture', 'a' or 'A'");
}

class Ar1Model final : public ChainModel {
 public:
  explicit Ar1Model(Ar1Params<double> params) : params_(std::move(params)), truth_(params_) {}

  Index dim() const override { return params_.p(); }
  std::optional<Vector<double>> analytic_mean() const override { return truth_.mu(); }
  void stream(Index n, Rng& rng, const std::function<void(const Vector<double>&)>& visit) const override {
    Ar1Sampler s(params_);
    s.start(rng);
    for (Index i = 0; i < n; ++i) {
      s.step(rng);
      visit(s.state());
    }
  }

 private:
  Ar1Params<double> params_;
  Ar1Truth<double> truth_;
};

class LogisticModel final : public ChainModel {
 public:
  LogisticModel(LogisticData data, double step_sd, Index burn_in)
      : data_(std::move(data)), step_sd_(step_sd), burn_in_(burn_in) {
    data_.validate();
    if (!(step_sd_ > 0.0)) throw ConfigError("step_sd must be positive");
  }

  Index dim() const override { return data_.coefficients(); }
  std::optional<Vector<double>> analytic_mean() const override { return std::nullopt; }
  void stream(Index n, Rng& rng, const std::function<void(const Vector<double>&)>& visit) const override {
    RwmLogistic s(data_, step_sd_, Vector<double>::Zero(dim()));
    for (Index i = 0; i < burn_in_; ++i) s.step(rng);
    for (Index i = 0; i < n; ++i) {
      s.step(rng);
      visit(s.state());
    }
  }

 private:
  LogisticData data_;
  double step_sd_;
  Index burn_in_;
};

class RandomEffectsModel final : public ChainModel {
 public:
  RandomEffectsModel(Vector<double> y, RandomEffectsHyper hyper, Index burn_in)
      : y_(std::move(y)), hyper_(hyper), burn_in_(burn_in) {
    hyper_.validate();
  }

  Index dim() const override { return 3 * y_.size() + 2; }
  std::optional<Vector<double>> analytic_mean() const override { return std::nullopt; }
  void stream(Index n, Rng& rng, const std::function<void(const Vector<double>&)>& visit) const override {
    RandomEffectsGibbs s(y_, hyper_);
    for (Index i = 0; i < burn_in_; ++i) s.step(rng);
    for (Index i = 0; i < n; ++i) {
      s.step(rng);
      visit(s.state());
    }
  }

 private:
  Vector<double> y_;
  RandomEffectsHyper hyper_;
  Index burn_in_;
};

}  // namespace

std::unique_ptr<ChainModel> make_model(Model model, const json& params) {
  const json p = params.is_null() ? json::object() : params;
  if (!p.is_object()) throw ConfigError("model parameters must be a JSON object");
  const Index burn_in = p.value("burn_in", Index{1000});
  if (burn_in < 0) throw ConfigError("burn_in must be non-negative");
  switch (model) {
    case Model::Ar1:
      return std::make_unique<Ar1Model>(ar1_params_from_json(p));
    case Model::Logistic: {
      LogisticData data = p.contains("data")
                              ? load_logistic_data(p.at("data").get<std::string>())
                              : synthetic_logistic_data(p.value("data_seed", kSyntheticLogisticSeed));
      return std::make_unique<LogisticModel>(std::move(data), p.value("step_sd", 0.3), burn_in);
    }
    case Model::RandomEffects: {
      RandomEffectsHyper h;
      h.a1 = p.value("a1", h.a1);
      h.a2 = p.value("a2", h.a2);
      h.a3 = p.value("a3", h.a3);
      h.b1 = p.value("b1", h.b1);
      h.b2 = p.value("b2", h.b2);
      h.b3 = p.value("b3", h.b3);
      h.m0 = p.value("m0", h.m0);
      h.v0 = p.value("v0", h.v0);
      Vector<double> y = p.contains("y") ? vector_from_json(p.at("y"))
                                         : synthetic_random_effects_data(
                                               p.value("K", Index{2}), p.value("data_seed", std::uint64_t{7}));
      return std::make_unique<RandomEffectsModel>(std::move(y), h, burn_in);
    }
  }
  throw ConfigError("unknown model");
}

}  // namespace misest
