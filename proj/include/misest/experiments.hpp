#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "misest/diagnostics.hpp"
#include "misest/estimators.hpp"
#include "misest/models.hpp"

namespace misest {

enum class TruthKind { Analytic, LongRun, External };

struct TruthSpec {
  TruthKind kind = TruthKind::Analytic;
  /// Length of the independent run whose sample mean serves as the truth (LongRun).
  Index n_truth = 10'000'000;
  /// Truth vector (External).
  std::vector<double> vector;
};

struct ExperimentConfig {
  Model model = Model::Ar1;
  nlohmann::json model_params = nlohmann::json::object();
  Index n = 100'000;
  Index replications = 200;
  double level = 0.9;
  std::vector<Method> methods{Method::Uis, Method::Mk, Method::Mis, Method::MisAdj};
  std::vector<RegionKind> regions{RegionKind::Ellipsoid, RegionKind::Cube, RegionKind::BonferroniCube};
  TruthSpec truth;
  std::uint64_t master_seed = 20170101;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
  bool keep_records = false;

  void validate() const;
};

ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

/// Outcome of one table row (method + region) in one replication.
struct RowOutcome {
  bool ok = false;
  bool degenerate = false;
  std::string failure;
  double ess = 0.0;
  double logdet = 0.0;
  bool has_region = false;
  double volume_root = 0.0;
  bool covered = false;
  Index s_n = -1;
  Index t_n = -1;
};

struct ReplicationRecord {
  Index index = 0;
  std::vector<RowOutcome> rows;  // parallel to ReplicationReport::rows
};

/// Aggregate statistics of one table row over the replications that succeeded.
struct RowSummary {
  std::string name;
  Index successes = 0;
  Index fail_count = 0;
  Index degenerate_count = 0;
  double ess_mean = 0.0;
  double ess_se = 0.0;
  double volroot_mean = 0.0;
  double volroot_se = 0.0;
  double logdet_mean = 0.0;
  double logdet_se = 0.0;
  double coverage = 0.0;
  double coverage_se = 0.0;
  double t_n_mean = 0.0;
  bool has_region = false;
};

struct ReplicationReport {
  ExperimentConfig config;
  Index p = 0;
  Vector<double> truth;
  /// Monte Carlo standard errors of a long-run truth, when available.
  std::optional<Vector<double>> truth_se;
  std::vector<RowSummary> rows;
  std::vector<ReplicationRecord> records;

  const RowSummary& row(std::string_view name) const;
};

/// Simulates config.replications chains, replication r from
/// Rng::stream(master_seed, r), and aggregates ESS, region volume and
/// truth coverage for every requested method. Reduction runs in replication
/// order, so the report does not depend on thread scheduling.
/// Estimator failures inside a replication are counted, not thrown.
ReplicationReport run_replications(const ExperimentConfig& config);

/// Row names produced for a configuration, in output order:
/// "uis", "uis-bonferroni", "mk", "mis", "misadj" as requested.
std::vector<std::string> report_row_names(const ExperimentConfig& config);

enum class TableFormat { Csv, Json };

std::string report_csv(const ReplicationReport& report);
nlohmann::json report_json(const ReplicationReport& report);
void emit_tables(const ReplicationReport& report, const std::filesystem::path& path, TableFormat format);

}  // namespace misest
