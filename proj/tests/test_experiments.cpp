#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "misest/ar1.hpp"
#include "misest/experiments.hpp"

using namespace misest;
using nlohmann::json;

namespace {

ExperimentConfig small_ar1(Index n, Index reps) {
  ExperimentConfig c;
  c.model = Model::Ar1;
  c.model_params = {{"fixture", "hadamard"}, {"p", 4}};
  c.n = n;
  c.replications = reps;
  c.master_seed = 77;
  c.threads = 1;
  return c;
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("row names follow the configured methods") {
  ExperimentConfig c;
  CHECK(report_row_names(c) == std::vector<std::string>{"uis", "uis-bonferroni", "mk", "mis", "misadj"});
  c.methods = {Method::Mis, Method::Uis};
  c.regions = {RegionKind::BonferroniCube};
  CHECK(report_row_names(c) == std::vector<std::string>{"mis", "uis-bonferroni"});
  c.regions = {RegionKind::Ellipsoid};
  CHECK(report_row_names(c) == std::vector<std::string>{"mis", "uis"});
}

TEST_CASE("config validation") {
  ExperimentConfig c = small_ar1(100, 2);
  CHECK_NOTHROW(c.validate());
  auto bad = c;
  bad.n = 3;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.replications = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.level = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.methods.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.methods = {Method::Mis, Method::Mis};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.model = Model::Logistic;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.truth.kind = TruthKind::External;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  CHECK_THROWS_AS(parse_experiment_config(json{{"n", 10}}), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(json{{"model", "ar1"}, {"methods", {"nope"}}}), Error);
  CHECK_THROWS_AS(parse_experiment_config(json{{"model", "ar1"}, {"n", "ten"}}), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(json{{"model", "ar1"}, {"truth", {{"kind", "psychic"}}}}), ConfigError);

  bad = c;
  bad.truth.kind = TruthKind::External;
  bad.truth.vector = {1.0, 2.0};
  CHECK_THROWS_AS(run_replications(bad), ConfigError);
}

TEST_CASE("config JSON round trip") {
  ExperimentConfig c = small_ar1(1234, 7);
  c.level = 0.95;
  c.methods = {Method::MisAdj, Method::Uis};
  c.regions = {RegionKind::Cube};
  c.truth.kind = TruthKind::LongRun;
  c.truth.n_truth = 5000;
  c.keep_records = true;
  const json j = to_json(c);
  const ExperimentConfig back = parse_experiment_config(j);
  CHECK(to_json(back) == j);
  CHECK(back.n == 1234);
  CHECK(back.methods == c.methods);
  CHECK(back.truth.kind == TruthKind::LongRun);

  misest::testing::TempDir dir("config");
  {
    std::ofstream out(dir / "c.json");
    out << j.dump(2);
  }
  CHECK(to_json(load_experiment_config(dir / "c.json")) == j);
  {
    std::ofstream out(dir / "broken.json");
    out << "{ not json";
  }
  CHECK_THROWS_AS(load_experiment_config(dir / "broken.json"), ConfigError);
  CHECK_THROWS_AS(load_experiment_config(dir / "missing.json"), IoError);

  const ExperimentConfig plain = parse_experiment_config(json{{"model", "ranef"}, {"truth", "long_run"}});
  CHECK(plain.truth.kind == TruthKind::LongRun);
}

TEST_CASE("single replication on each model") {
  struct Case {
    Model model;
    json params;
    TruthKind truth;
  };
  const std::vector<Case> cases{
      {Model::Ar1, {{"fixture", "hadamard"}, {"p", 4}}, TruthKind::Analytic},
      {Model::Logistic, {{"data_seed", 3}, {"step_sd", 0.3}, {"burn_in", 100}}, TruthKind::LongRun},
      {Model::RandomEffects, {{"K", 2}, {"data_seed", 5}, {"burn_in", 100}}, TruthKind::LongRun},
  };
  for (const Case& k : cases) {
    ExperimentConfig c;
    c.model = k.model;
    c.model_params = k.params;
    c.n = 4000;
    c.replications = 1;
    c.truth.kind = k.truth;
    c.truth.n_truth = 20'000;
    c.threads = 1;
    c.keep_records = true;
    const ReplicationReport r = run_replications(c);
    CHECK(r.rows.size() == 5);
    CHECK(r.records.size() == 1);
    CHECK(r.truth.size() == r.p);
    CHECK(r.truth.allFinite());
    if (k.truth == TruthKind::LongRun) CHECK(r.truth_se.has_value());
    for (const RowSummary& row : r.rows) {
      CHECK(row.successes + row.fail_count == 1);
      CHECK((row.coverage == 0.0 || row.coverage == 1.0));
      if (row.successes == 1) {
        CHECK(row.ess_mean > 0.0);
        // a single success has no spread to estimate
        CHECK(std::isnan(row.ess_se));
      }
    }
  }
}

TEST_CASE("reports are reproducible and independent of thread count") {
  ExperimentConfig c = small_ar1(2000, 6);
  c.keep_records = true;
  const ReplicationReport a = run_replications(c);
  const ReplicationReport b = run_replications(c);
  c.threads = 3;
  const ReplicationReport threaded = run_replications(c);
  CHECK(report_csv(a) == report_csv(b));
  CHECK(report_json(a).dump() == report_json(b).dump());
  CHECK(report_csv(a) == report_csv(threaded));
  json ja = report_json(a), jt = report_json(threaded);
  ja["config"].erase("threads");
  jt["config"].erase("threads");
  CHECK(ja == jt);

  ExperimentConfig other = small_ar1(2000, 6);
  other.master_seed = 78;
  CHECK(report_csv(run_replications(other)) != report_csv(a));
}

TEST_CASE("aggregate statistics follow from the records") {
  ExperimentConfig c = small_ar1(3000, 8);
  c.keep_records = true;
  const ReplicationReport r = run_replications(c);
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const RowSummary& row = r.rows[k];
    std::vector<double> ess;
    double covered = 0;
    for (const auto& rec : r.records) {
      const RowOutcome& o = rec.rows[k];
      if (!o.ok) continue;
      ess.push_back(o.ess);
      covered += o.covered ? 1.0 : 0.0;
    }
    REQUIRE(static_cast<Index>(ess.size()) == row.successes);
    if (ess.size() < 2) continue;
    double mean = 0;
    for (double e : ess) mean += e;
    mean /= static_cast<double>(ess.size());
    double ss = 0;
    for (double e : ess) ss += (e - mean) * (e - mean);
    const double kk = static_cast<double>(ess.size());
    CHECK(row.ess_mean == doctest::Approx(mean).epsilon(1e-12));
    CHECK(row.ess_se == doctest::Approx(std::sqrt(ss / (kk - 1) / kk)).epsilon(1e-10));
    const double cov = covered / kk;
    CHECK(row.coverage == doctest::Approx(cov).epsilon(1e-15));
    CHECK(row.coverage_se == doctest::Approx(std::sqrt(cov * (1 - cov) / kk)).epsilon(1e-12));
  }
  // replication records keep their order
  for (std::size_t i = 0; i < r.records.size(); ++i) CHECK(r.records[i].index == static_cast<Index>(i));
}

TEST_CASE("csv and json tables") {
  ExperimentConfig c = small_ar1(1000, 2);
  c.methods = {Method::Mis};
  c.regions = {RegionKind::Ellipsoid};
  const ReplicationReport r = run_replications(c);
  const auto lines = split_lines(report_csv(r));
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "method,ess_mean,ess_se,volroot_mean,volroot_se,coverage,coverage_se,fail_count");
  CHECK(lines[1].rfind("mis,", 0) == 0);
  CHECK(std::count(lines[1].begin(), lines[1].end(), ',') == 7);

  // shortest round-trip formatting: the csv value parses back to the exact double
  const std::string first = lines[1].substr(4, lines[1].find(',', 4) - 4);
  CHECK(std::stod(first) == r.rows[0].ess_mean);

  const json j = report_json(r);
  CHECK(j.at("p") == 4);
  CHECK(j.at("rows").size() == 1);
  CHECK(j.at("rows")[0].at("ess_mean").get<double>() == r.rows[0].ess_mean);
  CHECK(j.at("truth_se").is_null());
  CHECK(parse_experiment_config(j.at("config")).n == 1000);

  misest::testing::TempDir dir("tables");
  emit_tables(r, dir / "out.csv", TableFormat::Csv);
  emit_tables(r, dir / "out.json", TableFormat::Json);
  std::ifstream csv(dir / "out.csv");
  std::stringstream buf;
  buf << csv.rdbuf();
  CHECK(buf.str() == report_csv(r));
  std::ifstream js(dir / "out.json");
  CHECK(json::parse(js) == j);
  CHECK_THROWS_AS(emit_tables(r, dir / "no" / "such" / "dir.csv", TableFormat::Csv), IoError);
}

TEST_CASE("long-run truth approaches the analytic mean") {
  ExperimentConfig c = small_ar1(1000, 1);
  c.methods = {Method::Mis};
  c.truth.kind = TruthKind::LongRun;
  c.truth.n_truth = 200'000;
  const ReplicationReport r = run_replications(c);
  REQUIRE(r.truth_se.has_value());
  const Vector<double> mu = ar1_truth(ar1_hadamard_fixture<double>(4)).mu();
  for (Index i = 0; i < 4; ++i) {
    CHECK((*r.truth_se)(i) > 0.0);
    CHECK(std::abs(r.truth(i) - mu(i)) <= 4.0 * (*r.truth_se)(i));
  }
}

TEST_CASE("external truth is used verbatim") {
  ExperimentConfig c = small_ar1(1000, 3);
  c.methods = {Method::Mis};
  c.truth.kind = TruthKind::External;
  c.truth.vector = {100.0, 100.0, 100.0, 100.0};
  const ReplicationReport r = run_replications(c);
  CHECK(r.truth == Vector<double>::Constant(4, 100.0));
  CHECK(r.row("mis").coverage == 0.0);
  CHECK_THROWS_AS(r.row("mk"), Error);
}
