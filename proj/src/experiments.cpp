#include "misest/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "misest/acov.hpp"

namespace misest {

using nlohmann::json;

namespace {

constexpr std::uint64_t kTruthStream = std::numeric_limits<std::uint64_t>::max();
constexpr Index kTruthPrefix = 1'000'000;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename T>
bool contains(const std::vector<T>& v, const T& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

std::string_view to_string(TruthKind k) {
  switch (k) {
    case TruthKind::Analytic:
      return "analytic";
    case TruthKind::LongRun:
      return "long_run";
    case TruthKind::External:
      return "external";
  }
  return "?";
}

TruthKind parse_truth_kind(std::string_view s) {
  if (s == "analytic") return TruthKind::Analytic;
  if (s == "long_run" || s == "long-run") return TruthKind::LongRun;
  if (s == "external") return TruthKind::External;
  throw ConfigError("unknown truth kind '" + std::string(s) + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n < 4) throw ConfigError("n must be at least 4");
  if (replications < 1) throw ConfigError("replications must be at least 1");
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("level must lie in (0, 1)");
  if (methods.empty()) throw ConfigError("at least one method is required");
  for (std::size_t i = 0; i < methods.size(); ++i)
    for (std::size_t k = i + 1; k < methods.size(); ++k)
      if (methods[i] == methods[k]) throw ConfigError("duplicate method in config");
  if (truth.kind == TruthKind::Analytic && model != Model::Ar1) {
    throw ConfigError("analytic truth is only available for the ar1 model");
  }
  if (truth.kind == TruthKind::LongRun && truth.n_truth < 4) throw ConfigError("n_truth must be at least 4");
  if (truth.kind == TruthKind::External && truth.vector.empty()) {
    throw ConfigError("external truth needs a non-empty vector");
  }
}

ExperimentConfig parse_experiment_config(const json& j) {
  ExperimentConfig c;
  try {
    c.model = parse_model(j.at("model").get<std::string>());
    if (j.contains("model_params")) c.model_params = j.at("model_params");
    c.n = j.value("n", c.n);
    c.replications = j.value("replications", c.replications);
    c.level = j.value("level", c.level);
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto& m : j.at("methods")) c.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (j.contains("regions")) {
      c.regions.clear();
      for (const auto& r : j.at("regions")) c.regions.push_back(parse_region_kind(r.get<std::string>()));
    }
    c.truth.kind = c.model == Model::Ar1 ? TruthKind::Analytic : TruthKind::LongRun;
    if (j.contains("truth")) {
      const json& t = j.at("truth");
      if (t.is_string()) {
        c.truth.kind = parse_truth_kind(t.get<std::string>());
      } else {
        c.truth.kind = parse_truth_kind(t.at("kind").get<std::string>());
        c.truth.n_truth = t.value("n_truth", c.truth.n_truth);
        if (t.contains("vector")) c.truth.vector = t.at("vector").get<std::vector<double>>();
      }
    }
    c.master_seed = j.value("master_seed", c.master_seed);
    c.threads = j.value("threads", c.threads);
    c.keep_records = j.value("keep_records", c.keep_records);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_experiment_config(j);
}

json to_json(const ExperimentConfig& c) {
  json methods = json::array();
  for (Method m : c.methods) methods.push_back(std::string(to_string(m)));
  json regions = json::array();
  for (RegionKind r : c.regions) regions.push_back(std::string(to_string(r)));
  json truth = {{"kind", std::string(to_string(c.truth.kind))}};
  if (c.truth.kind == TruthKind::LongRun) truth["n_truth"] = c.truth.n_truth;
  if (c.truth.kind == TruthKind::External) truth["vector"] = c.truth.vector;
  return {{"model", std::string(to_string(c.model))},
          {"model_params", c.model_params},
          {"n", c.n},
          {"replications", c.replications},
          {"level", c.level},
          {"methods", methods},
          {"regions", regions},
          {"truth", truth},
          {"master_seed", c.master_seed},
          {"threads", c.threads},
          {"keep_records", c.keep_records}};
}

std::vector<std::string> report_row_names(const ExperimentConfig& c) {
  std::vector<std::string> names;
  const bool cube = contains(c.regions, RegionKind::Cube);
  const bool bonf = contains(c.regions, RegionKind::BonferroniCube);
  for (Method m : c.methods) {
    if (m == Method::Uis) {
      if (cube || !bonf) names.emplace_back("uis");
      if (bonf) names.emplace_back("uis-bonferroni");
    } else {
      names.emplace_back(to_string(m));
    }
  }
  return names;
}

const RowSummary& ReplicationReport::row(std::string_view name) const {
  for (const auto& r : rows)
    if (r.name == name) return r;
  throw Error("report has no row '" + std::string(name) + "'");
}

namespace {

struct UisPart {
  bool ok = false;
  std::string failure;
  double min_ess = 0.0;
  double logdet = 0.0;
  Index t_n = -1;
  Vector<double> sd;
};

UisPart component_uis(LagPairSequence<double>& seq) {
  UisPart u;
  u.sd.resize(seq.p());
  u.min_ess = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < seq.p(); ++j) {
    const UvEstimate<double> e = uis_component(seq, j);
    if (e.degenerate || !(e.sigma2 > 0.0)) {
      u.failure = "uis-degenerate";
      return u;
    }
    u.sd(j) = std::sqrt(e.sigma2);
    u.logdet += std::log(e.sigma2);
    u.t_n = std::max(u.t_n, e.t_n);
    u.min_ess = std::min(u.min_ess, static_cast<double>(seq.n()) * seq.gamma0()(j, j) / e.sigma2);
  }
  u.ok = true;
  return u;
}

ReplicationRecord run_one(const ExperimentConfig& c, const ChainModel& model,
                          const std::vector<std::string>& names, const Vector<double>& truth,
                          Index r) {
  Rng rng = Rng::stream(c.master_seed, static_cast<std::uint64_t>(r));
  const Chain chain = model.simulate(c.n, rng);
  LagPairSequence<double> seq(chain);
  const Vector<double> mu = chain.mean();
  const double alpha = 1.0 - c.level;
  const bool lambda_pd = is_pd(seq.gamma0());
  const bool want_ellipsoid = contains(c.regions, RegionKind::Ellipsoid);

  ReplicationRecord rec;
  rec.index = r;
  std::optional<UisPart> uis_part;
  for (const std::string& name : names) {
    RowOutcome out;
    if (name == "uis" || name == "uis-bonferroni") {
      if (!uis_part) uis_part = component_uis(seq);
      const UisPart& u = *uis_part;
      out.t_n = u.t_n;
      if (!u.ok) {
        out.failure = u.failure;
        out.degenerate = true;
      } else {
        out.ok = true;
        out.ess = u.min_ess;
        out.logdet = u.logdet;
        const bool bonf = name == "uis-bonferroni";
        if (bonf || contains(c.regions, RegionKind::Cube)) {
          const Region region = cube_region(mu, u.sd, c.n, alpha, bonf);
          out.has_region = true;
          out.volume_root = region.volume_root();
          out.covered = region.contains(truth);
        }
      }
      rec.rows.push_back(std::move(out));
      continue;
    }

    const Method m = parse_method(name);
    try {
      const MvEstimate<double> e = m == Method::Mk    ? mk(seq)
                                   : m == Method::Mis ? mis(seq)
                                                      : misadj(seq);
      out.s_n = e.s_n;
      out.t_n = e.t_n;
      out.logdet = e.logdet;
      if (e.degenerate) {
        out.degenerate = true;
        out.failure = "degenerate";
      } else if (!e.pd) {
        out.failure = "estimate-not-pd";
      } else if (!lambda_pd) {
        out.failure = "sample-covariance-not-pd";
      } else {
        out.ok = true;
        out.ess = ess(c.n, seq.gamma0(), e.sigma);
        if (want_ellipsoid) {
          const Region region = ellipsoid_region(mu, e.sigma, c.n, alpha);
          out.has_region = true;
          out.volume_root = region.volume_root();
          out.covered = region.contains(truth);
        }
      }
    } catch (const NoPositiveDefinitePartialSum&) {
      out.failure = "no-pd-partial-sum";
    } catch (const EigenFailure& e) {
      out.failure = "eigen-failure";
    }
    rec.rows.push_back(std::move(out));
  }
  return rec;
}

void mean_se(const std::vector<double>& x, double& mean, double& se) {
  if (x.empty()) {
    mean = se = kNaN;
    return;
  }
  const double k = static_cast<double>(x.size());
  double s = 0.0;
  for (double v : x) s += v;
  mean = s / k;
  if (x.size() < 2) {
    se = kNaN;
    return;
  }
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  se = std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
}

RowSummary summarize(const std::string& name, const std::vector<ReplicationRecord>& records,
                     std::size_t column) {
  RowSummary s;
  s.name = name;
  std::vector<double> ess_v, vol_v, logdet_v, tn_v;
  Index covered = 0;
  for (const auto& rec : records) {
    const RowOutcome& o = rec.rows[column];
    if (o.degenerate) ++s.degenerate_count;
    if (!o.ok) {
      ++s.fail_count;
      continue;
    }
    ++s.successes;
    ess_v.push_back(o.ess);
    logdet_v.push_back(o.logdet);
    tn_v.push_back(static_cast<double>(o.t_n));
    if (o.has_region) {
      s.has_region = true;
      vol_v.push_back(o.volume_root);
      if (o.covered) ++covered;
    }
  }
  double unused;
  mean_se(ess_v, s.ess_mean, s.ess_se);
  mean_se(logdet_v, s.logdet_mean, s.logdet_se);
  mean_se(tn_v, s.t_n_mean, unused);
  if (s.has_region) {
    mean_se(vol_v, s.volroot_mean, s.volroot_se);
    const double k = static_cast<double>(vol_v.size());
    s.coverage = static_cast<double>(covered) / k;
    s.coverage_se = std::sqrt(s.coverage * (1.0 - s.coverage) / k);
  } else {
    s.volroot_mean = s.volroot_se = s.coverage = s.coverage_se = kNaN;
  }
  return s;
}

// Long-run pseudo-truth: compensated running mean of an independent chain;
// standard errors from mIS on its first kTruthPrefix states.
void long_run_truth(const ExperimentConfig& c, const ChainModel& model, ReplicationReport& report) {
  const Index p = model.dim();
  const Index keep = std::min(c.truth.n_truth, kTruthPrefix);
  Vector<double> sum = Vector<double>::Zero(p);
  Vector<double> comp = Vector<double>::Zero(p);
  Matrix<double> prefix(keep, p);
  Index i = 0;
  Rng rng = Rng::stream(c.master_seed, kTruthStream);
  model.stream(c.truth.n_truth, rng, [&](const Vector<double>& x) {
    if (i < keep) prefix.row(i) = x.transpose();
    ++i;
    for (Index j = 0; j < p; ++j) {  // Neumaier summation
      const double t = sum(j) + x(j);
      comp(j) += std::abs(sum(j)) >= std::abs(x(j)) ? (sum(j) - t) + x(j) : (x(j) - t) + sum(j);
      sum(j) = t;
    }
  });
  report.truth = (sum + comp) / static_cast<double>(c.truth.n_truth);
  try {
    const MvEstimate<double> e = mis(Chain(std::move(prefix)));
    report.truth_se = (e.sigma.matrix().diagonal().cwiseMax(0.0) / static_cast<double>(c.truth.n_truth))
                          .cwiseSqrt()
                          .eval();
  } catch (const Error&) {
    report.truth_se.reset();
  }
}

}  // namespace

ReplicationReport run_replications(const ExperimentConfig& config) {
  config.validate();
  const auto model = make_model(config.model, config.model_params);

  ReplicationReport report;
  report.config = config;
  report.p = model->dim();
  switch (config.truth.kind) {
    case TruthKind::Analytic: {
      auto mu = model->analytic_mean();
      if (!mu) throw ConfigError("model has no analytic mean");
      report.truth = *mu;
      break;
    }
    case TruthKind::External:
      if (static_cast<Index>(config.truth.vector.size()) != report.p) {
        throw ConfigError("external truth vector has the wrong dimension");
      }
      report.truth = Eigen::Map<const Vector<double>>(config.truth.vector.data(), report.p);
      break;
    case TruthKind::LongRun:
      long_run_truth(config, *model, report);
      break;
  }

  const std::vector<std::string> names = report_row_names(config);
  std::vector<ReplicationRecord> records(static_cast<std::size_t>(config.replications));

  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<Index>(threads, config.replications));
  std::atomic<Index> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto worker = [&] {
    while (true) {
      const Index r = next.fetch_add(1);
      if (r >= config.replications) return;
      try {
        records[static_cast<std::size_t>(r)] = run_one(config, *model, names, report.truth, r);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = config.replications;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  for (std::size_t k = 0; k < names.size(); ++k) report.rows.push_back(summarize(names[k], records, k));
  if (config.keep_records) report.records = std::move(records);
  return report;
}

namespace {

std::string number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json vector_json(const Vector<double>& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace

std::string report_csv(const ReplicationReport& report) {
  std::string out = "method,ess_mean,ess_se,volroot_mean,volroot_se,coverage,coverage_se,fail_count\n";
  for (const RowSummary& r : report.rows) {
    out += r.name;
    for (double v : {r.ess_mean, r.ess_se, r.volroot_mean, r.volroot_se, r.coverage, r.coverage_se}) {
      out += ',';
      out += number(v);
    }
    out += ',' + std::to_string(r.fail_count) + '\n';
  }
  return out;
}

json report_json(const ReplicationReport& report) {
  json rows = json::array();
  for (const RowSummary& r : report.rows) {
    rows.push_back({{"method", r.name},
                    {"successes", r.successes},
                    {"fail_count", r.fail_count},
                    {"degenerate_count", r.degenerate_count},
                    {"ess_mean", r.ess_mean},
                    {"ess_se", r.ess_se},
                    {"volroot_mean", r.volroot_mean},
                    {"volroot_se", r.volroot_se},
                    {"logdet_mean", r.logdet_mean},
                    {"logdet_se", r.logdet_se},
                    {"coverage", r.coverage},
                    {"coverage_se", r.coverage_se},
                    {"t_n_mean", r.t_n_mean}});
  }
  json j = {{"config", to_json(report.config)},
            {"p", report.p},
            {"truth", vector_json(report.truth)},
            {"truth_se", report.truth_se ? vector_json(*report.truth_se) : json(nullptr)},
            {"rows", rows}};
  if (!report.records.empty()) {
    json recs = json::array();
    for (const auto& rec : report.records) {
      json cells = json::array();
      for (std::size_t k = 0; k < rec.rows.size(); ++k) {
        const RowOutcome& o = rec.rows[k];
        cells.push_back({{"method", report.rows[k].name},
                         {"ok", o.ok},
                         {"failure", o.failure},
                         {"ess", o.ess},
                         {"logdet", o.logdet},
                         {"volume_root", o.volume_root},
                         {"covered", o.covered},
                         {"s_n", o.s_n},
                         {"t_n", o.t_n}});
      }
      recs.push_back({{"replication", rec.index}, {"rows", cells}});
    }
    j["records"] = recs;
  }
  return j;
}

void emit_tables(const ReplicationReport& report, const std::filesystem::path& path, TableFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  if (format == TableFormat::Csv) {
    out << report_csv(report);
  } else {
    out << report_json(report).dump(2) << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace misest
