// Command-line front end: simulate chains, estimate Sigma, ESS, confidence
// regions and replication experiments.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "misest/chain_io.hpp"
#include "misest/diagnostics.hpp"
#include "misest/estimators.hpp"
#include "misest/experiments.hpp"
#include "misest/logistic.hpp"
#include "misest/models.hpp"

using namespace misest;
using nlohmann::json;

namespace {

// Exit codes.
constexpr int kHardFailure = 1;
constexpr int kEstimatorFailure = 2;

struct EstimatorFailure : Error {
  using Error::Error;
};

ChainFormat chain_format(const std::string& flag, const std::string& path) {
  return flag.empty() ? format_from_extension(path) : parse_chain_format(flag);
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path);
}

json row_major(const SymMatrix<double>& m) {
  json a = json::array();
  for (Index i = 0; i < m.dim(); ++i)
    for (Index j = 0; j < m.dim(); ++j) a.push_back(m(i, j));
  return a;
}

json vector_json(const Vector<double>& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

struct UisResult {
  Vector<double> sigma2;
  std::vector<Index> t_n;
  bool degenerate = false;
};

UisResult uis_all(LagPairSequence<double>& seq) {
  UisResult r;
  r.sigma2.resize(seq.p());
  for (Index j = 0; j < seq.p(); ++j) {
    const UvEstimate<double> u = uis_component(seq, j);
    r.sigma2(j) = u.sigma2;
    r.t_n.push_back(u.t_n);
    r.degenerate = r.degenerate || u.degenerate || !(u.sigma2 > 0.0);
  }
  return r;
}

MvEstimate<double> multivariate(Method m, LagPairSequence<double>& seq) {
  try {
    switch (m) {
      case Method::Mk:
        return mk(seq);
      case Method::Mis:
        return mis(seq);
      case Method::MisAdj:
        return misadj(seq);
      case Method::Uis:
        break;
    }
  } catch (const NoPositiveDefinitePartialSum& e) {
    throw EstimatorFailure(e.what());
  }
  throw Error("uis is not a multivariate estimator");
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string model;
  Index n = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string params;
  std::string format;
};

int run_simulate(const SimulateArgs& a) {
  const json params = a.params.empty() ? json::object() : read_json(a.params);
  const auto model = make_model(parse_model(a.model), params);
  Rng rng(a.seed);
  const Chain chain = model->simulate(a.n, rng);
  save_chain(chain, a.out, chain_format(a.format, a.out));
  return 0;
}

// --- estimate --------------------------------------------------------------

struct EstimateArgs {
  std::string method;
  std::string input;
  std::string output;
  std::string format;
};

int run_estimate(const EstimateArgs& a) {
  const Method method = parse_method(a.method);
  const Chain chain = load_chain(a.input, chain_format(a.format, a.input));
  LagPairSequence<double> seq(chain);
  json j = {{"method", std::string(to_string(method))}, {"n", chain.n()}, {"p", chain.p()}};
  if (method == Method::Uis) {
    const UisResult u = uis_all(seq);
    const SymMatrix<double> sigma = SymMatrix<double>::diagonal(u.sigma2);
    const SignedLogDet<double> d = signed_logdet(sigma);
    j["sigma"] = row_major(sigma);
    j["s_n"] = -1;
    j["t_n"] = u.t_n;
    j["logdet"] = d.log_abs;
    j["det_sign"] = d.sign;
    j["pd"] = !u.degenerate;
    j["degenerate"] = u.degenerate;
  } else {
    const MvEstimate<double> e = multivariate(method, seq);
    j["sigma"] = row_major(e.sigma);
    j["s_n"] = e.s_n;
    j["t_n"] = e.t_n;
    j["logdet"] = e.logdet;
    j["det_sign"] = e.det_sign;
    j["pd"] = e.pd;
    j["degenerate"] = e.degenerate;
  }
  write_json(j, a.output);
  return 0;
}

// --- ess -------------------------------------------------------------------

struct EssArgs {
  std::string method = "mis";
  std::string input;
  std::string format;
};

int run_ess(const EssArgs& a) {
  const Method method = parse_method(a.method);
  const Chain chain = load_chain(a.input, chain_format(a.format, a.input));
  LagPairSequence<double> seq(chain);
  json j = {{"method", std::string(to_string(method))}, {"n", chain.n()}, {"p", chain.p()}};
  if (method == Method::Uis) {
    const UnivariateEss u = min_univariate_ess(seq);
    j["ess"] = u.min_ess;
    j["argmin"] = u.argmin;
    j["excluded"] = u.excluded;
  } else {
    const MvEstimate<double> e = multivariate(method, seq);
    if (e.degenerate || !e.pd) throw EstimatorFailure("estimate is not positive definite");
    j["ess"] = ess(chain.n(), seq.gamma0(), e.sigma);
  }
  j["ess_per_n"] = j["ess"].get<double>() / static_cast<double>(chain.n());
  write_json(j, "");
  return 0;
}

// --- region ----------------------------------------------------------------

struct RegionArgs {
  double level = 0.9;
  std::string kind = "ellipsoid";
  std::string input;
  std::string method;
  std::string format;
  std::vector<double> point;
};

int run_region(const RegionArgs& a) {
  const RegionKind kind = parse_region_kind(a.kind);
  if (!(a.level > 0.0 && a.level < 1.0)) throw RangeError("level must lie in (0, 1)");
  const Method method =
      a.method.empty() ? (kind == RegionKind::Ellipsoid ? Method::Mis : Method::Uis) : parse_method(a.method);
  const Chain chain = load_chain(a.input, chain_format(a.format, a.input));
  LagPairSequence<double> seq(chain);
  const Vector<double> mu = chain.mean();
  const double alpha = 1.0 - a.level;

  std::optional<Region> region;
  if (kind == RegionKind::Ellipsoid) {
    if (method == Method::Uis) throw ConfigError("an ellipsoid needs a multivariate method");
    const MvEstimate<double> e = multivariate(method, seq);
    if (e.degenerate || !e.pd) throw EstimatorFailure("estimate is not positive definite");
    region = ellipsoid_region(mu, e.sigma, chain.n(), alpha);
  } else {
    Vector<double> sd(chain.p());
    if (method == Method::Uis) {
      const UisResult u = uis_all(seq);
      if (u.degenerate) throw EstimatorFailure("a uis component estimate is degenerate");
      sd = u.sigma2.cwiseSqrt();
    } else {
      const MvEstimate<double> e = multivariate(method, seq);
      if (e.degenerate || !e.pd) throw EstimatorFailure("estimate is not positive definite");
      sd = e.sigma.matrix().diagonal().cwiseSqrt();
    }
    region = cube_region(mu, sd, chain.n(), alpha, kind == RegionKind::BonferroniCube);
  }

  json j = {{"kind", std::string(to_string(kind))},
            {"method", std::string(to_string(method))},
            {"level", a.level},
            {"n", chain.n()},
            {"p", chain.p()},
            {"center", vector_json(region->center())},
            {"cutoff", region->cutoff()},
            {"log_volume", region->log_volume()},
            {"volume", region->volume()},
            {"volume_root", region->volume_root()}};
  if (kind != RegionKind::Ellipsoid) j["half_widths"] = vector_json(region->half_widths());
  if (!a.point.empty()) {
    const Vector<double> x = Eigen::Map<const Vector<double>>(a.point.data(), static_cast<Index>(a.point.size()));
    j["contains"] = region->contains(x);
  }
  write_json(j, "");
  return 0;
}

// --- experiment ------------------------------------------------------------

struct ExperimentArgs {
  std::string config;
  std::string out;
  std::string format;
  int threads = -1;
};

int run_experiment(const ExperimentArgs& a) {
  ExperimentConfig config = load_experiment_config(a.config);
  if (a.threads >= 0) config.threads = static_cast<unsigned>(a.threads);
  TableFormat format = TableFormat::Csv;
  if (a.format == "json" || (a.format.empty() && a.out.ends_with(".json"))) {
    format = TableFormat::Json;
  } else if (!a.format.empty() && a.format != "csv") {
    throw ConfigError("experiment tables are written as csv or json");
  }
  const ReplicationReport report = run_replications(config);
  emit_tables(report, a.out, format);
  return 0;
}

// --- logit-data ------------------------------------------------------------

int run_logit_data(std::uint64_t seed, const std::string& out) {
  save_logistic_data(synthetic_logistic_data(seed), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multivariate initial sequence estimators for MCMC output"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a chain from one of the fixture models");
  simulate->add_option("--model", sim.model, "ar1, logistic or ranef")->required()
      ->check(CLI::IsMember({"ar1", "logistic", "ranef"}));
  simulate->add_option("--n", sim.n, "Number of recorded states")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "64-bit seed")->required();
  simulate->add_option("--out", sim.out, "Output chain file")->required();
  simulate->add_option("--params", sim.params, "JSON model parameters");
  simulate->add_option("--format", sim.format, "csv or bin (default: from extension)")
      ->check(CLI::IsMember({"csv", "bin"}));

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate the asymptotic covariance matrix");
  estimate->add_option("--method", est.method, "uis, mk, mis or misadj")->required()
      ->check(CLI::IsMember({"uis", "mk", "mis", "misadj"}));
  estimate->add_option("--input", est.input, "Chain file")->required()->check(CLI::ExistingFile);
  estimate->add_option("--output", est.output, "Result JSON (default: stdout)");
  estimate->add_option("--format", est.format, "Input format csv or bin")->check(CLI::IsMember({"csv", "bin"}));

  EssArgs ea;
  auto* ess_cmd = app.add_subcommand("ess", "Effective sample size");
  ess_cmd->add_option("--input", ea.input, "Chain file")->required()->check(CLI::ExistingFile);
  ess_cmd->add_option("--method", ea.method, "uis, mk, mis or misadj")
      ->check(CLI::IsMember({"uis", "mk", "mis", "misadj"}));
  ess_cmd->add_option("--format", ea.format, "Input format csv or bin")->check(CLI::IsMember({"csv", "bin"}));

  RegionArgs ra;
  auto* region = app.add_subcommand("region", "Confidence region for the mean");
  region->add_option("--level", ra.level, "Confidence level");
  region->add_option("--kind", ra.kind, "ellipsoid, cube or bonf")
      ->check(CLI::IsMember({"ellipsoid", "cube", "bonf"}));
  region->add_option("--input", ra.input, "Chain file")->required()->check(CLI::ExistingFile);
  region->add_option("--method", ra.method, "Estimator (default: mis for ellipsoids, uis for cubes)")
      ->check(CLI::IsMember({"uis", "mk", "mis", "misadj"}));
  region->add_option("--contains", ra.point, "Report whether this point lies in the region")->delimiter(',');
  region->add_option("--format", ra.format, "Input format csv or bin")->check(CLI::IsMember({"csv", "bin"}));

  ExperimentArgs xa;
  auto* experiment = app.add_subcommand("experiment", "Run a replication experiment");
  experiment->add_option("--config", xa.config, "Experiment JSON")->required()->check(CLI::ExistingFile);
  experiment->add_option("--out", xa.out, "Report file")->required();
  experiment->add_option("--format", xa.format, "Report format csv or json (default: from extension)")
      ->check(CLI::IsMember({"csv", "json"}));
  experiment->add_option("--threads", xa.threads, "Worker threads, 0 = all cores");

  std::uint64_t logit_seed = kSyntheticLogisticSeed;
  std::string logit_out;
  auto* logit = app.add_subcommand("logit-data", "Write the synthetic logistic regression data set");
  logit->add_option("--seed", logit_seed, "Generator seed");
  logit->add_option("--out", logit_out, "Output CSV")->required();
  std::string logit_format = "csv";
  logit->add_option("--format", logit_format, "Output format (csv only)")->check(CLI::IsMember({"csv"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return run_simulate(sim);
    if (*estimate) return run_estimate(est);
    if (*ess_cmd) return run_ess(ea);
    if (*region) return run_region(ra);
    if (*experiment) return run_experiment(xa);
    if (*logit) return run_logit_data(logit_seed, logit_out);
  } catch (const EstimatorFailure& e) {
    std::cerr << "estimator failure: " << e.what() << '\n';
    return kEstimatorFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kHardFailure;
  }
  return 0;
}
