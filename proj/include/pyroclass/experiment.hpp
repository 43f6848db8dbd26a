#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pyroclass/config.hpp"
#include "pyroclass/metrics.hpp"

namespace pyroclass {

std::filesystem::path train_file(const ExperimentConfig& cfg, std::uint32_t resolution);
std::filesystem::path test_file(const ExperimentConfig& cfg, const std::string& test_set, std::uint32_t resolution);

struct PrepareSummary {
  std::size_t train_images = 0;
  std::size_t skipped_files = 0;
  std::vector<std::filesystem::path> written;
};

/// For every resolution: train images are resized, augmented and written to train_<R>.ffds;
/// each test set is resized only and written to test_<name>_<R>.ffds. All inputs are
/// ingested before the first file is written.
PrepareSummary cmd_prepare(const ExperimentConfig& cfg);

/// One (model, resolution, test set) evaluation.
struct ReportRow {
  std::string model;
  std::string test_set;
  std::uint32_t resolution = 0;
  std::string best_params;
  double cv_mean = 0.0;
  ConfusionMatrix cm;
  double accuracy = 0.0;
  std::optional<double> tpr;
  std::optional<double> fpr;
  std::optional<double> f1;
  /// Threshold-swept curve over decision scores; empty when the test set has one class.
  RocCurve roc;
  std::optional<double> auc;
};

/// Curve through one model's per-resolution operating points on one test set.
struct OperatingCurve {
  std::string model;
  std::string test_set;
  RocCurve roc;
  double auc = 0.0;
};

struct Failure {
  std::string model;
  std::uint32_t resolution = 0;
  std::string test_set;
  std::string message;
};

struct Provenance {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::size_t folds = 0;
  bool stratified = false;
  unsigned workers = 1;
  std::string started_at;
  std::string finished_at;
  std::string version;
};

struct SweepReport {
  /// Ordered by model (config order), resolution, test set.
  std::vector<ReportRow> rows;
  std::vector<OperatingCurve> operating_curves;
  std::vector<Failure> failures;
  Provenance provenance;
};

/// Grid search per (model, resolution) on the training file, refit of the best cell on the
/// full training data, evaluation on every test set. Cell failures are recorded, not thrown.
/// With prepare_missing, cmd_prepare runs first when any dataset file is absent.
SweepReport cmd_sweep(const ExperimentConfig& cfg, bool prepare_missing = false);

/// Rebuilds operating_curves from rows.
void compute_operating_curves(SweepReport& report);

void save_report(const SweepReport& report, const std::filesystem::path& path);
SweepReport load_report(const std::filesystem::path& path);

/// CSV with header model,test_set,resolution,accuracy,tp,fp,fn,tn,tpr,fpr,f1,auc;
/// reals with 6 decimals, undefined values as n/a.
std::string results_csv(const SweepReport& report);

/// Writes results.csv, accuracy_<test>.svg per test set and roc_<model>_<test>.svg per
/// model and test set (no SVGs for an empty report), plus failures.log when needed.
std::vector<std::filesystem::path> cmd_report(const SweepReport& report, const std::filesystem::path& out_dir);

} // namespace pyroclass
