#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pyroclass/dataset.hpp"
#include "pyroclass/kernels.hpp"
#include "pyroclass/logreg.hpp"
#include "pyroclass/svm.hpp"

namespace pyroclass {

enum class ModelFamily { logreg, svm_sigmoid, svm_poly, svm_gaussian };

inline constexpr std::array<ModelFamily, 4> kAllModels{ModelFamily::logreg, ModelFamily::svm_sigmoid,
                                                       ModelFamily::svm_poly, ModelFamily::svm_gaussian};

/// "logreg", "svm-sigmoid", "svm-poly", "svm-gaussian".
std::string_view model_name(ModelFamily family);
/// Throws ConfigError listing the valid names.
ModelFamily parse_model_name(std::string_view name);

/// Fold index per sample.
struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::size_t> assignment;
  bool stratified = false;

  std::vector<std::size_t> train_indices(std::size_t fold) const;
  std::vector<std::size_t> validation_indices(std::size_t fold) const;
  std::vector<std::size_t> fold_sizes() const;

  friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

/// Indices 0..n-1 shuffled (Fisher-Yates over xoshiro256** seeded with seed),
/// then dealt round-robin: the p-th shuffled index goes to fold p % k.
/// Throws ConfigError unless k >= 2 and n >= k.
FoldPlan kfold_split(std::size_t n, std::size_t k, std::uint64_t seed);

/// Same deal, but positives are shuffled and dealt first, then negatives, with the
/// round-robin counter carried across so fold sizes still differ by at most one.
FoldPlan kfold_split_stratified(std::span<const Label> labels, std::size_t k, std::uint64_t seed);

using Predictor = std::function<Label(std::span<const double>)>;
using Trainer = std::function<Predictor(const LabeledDataset&)>;

struct CvResult {
  /// nullopt for a failed fold.
  std::vector<std::optional<double>> fold_accuracy;
  /// Empty for successful folds.
  std::vector<std::string> fold_errors;
  /// Mean over successful folds; nullopt when every fold failed.
  std::optional<double> mean;

  std::size_t failed() const;
};

/// A fold fails when training it raises a DataError (e.g. a split that lost a class);
/// failed folds are flagged and left out of the mean.
CvResult cross_validate(const LabeledDataset& ds, const Trainer& trainer, const FoldPlan& plan);
CvResult cross_validate(const LabeledDataset& ds, const Trainer& trainer, std::size_t k, std::uint64_t seed,
                        bool stratified = false);

/// A kernel hyperparameter that may be given as 1/n_features.
struct ScaledValue {
  double value = 0.0;
  bool inverse_dim = false;

  double resolve(std::size_t n_features) const {
    return inverse_dim ? 1.0 / static_cast<double>(n_features) : value;
  }
  std::string to_string() const;
  static ScaledValue inverse_of_dim() { return {0.0, true}; }
};

/// One point of a grid.
struct ParamCell {
  ModelFamily family = ModelFamily::svm_gaussian;
  /// Box constraint; 0 for logreg.
  double C = 0.0;
  KernelSpec kernel = LinearKernel{};
  LogRegConfig logreg;

  std::string describe() const;
  /// Tie-break key in field order: C, then kernel parameters (polynomial c, d; gaussian gamma;
  /// sigmoid alpha, beta), then logreg lambda. Lexicographically smaller keys win ties.
  std::array<double, 4> key() const;

  friend bool operator==(const ParamCell&, const ParamCell&) = default;
};

/// Candidate hyperparameters for one model family.
struct ParamGrid {
  ModelFamily family = ModelFamily::svm_gaussian;
  std::vector<double> C{0.1, 1.0, 10.0, 100.0};
  std::vector<int> degrees{2, 3, 4};
  std::vector<double> offsets{0.0, 1.0};
  std::vector<ScaledValue> gammas{ScaledValue::inverse_of_dim(), {0.01}, {0.1}, {1.0}};
  std::vector<ScaledValue> alphas{ScaledValue::inverse_of_dim(), {0.01}};
  std::vector<double> betas{0.0, -1.0};
  std::vector<double> lambdas{1e-4};
  /// learning_rate and iterations for logreg cells.
  LogRegConfig logreg;

  static ParamGrid defaults(ModelFamily family);
  /// Cartesian product in nested order C, then kernel parameters. Throws ConfigError if empty
  /// or if any cell breaks a kernel invariant.
  std::vector<ParamCell> expand(std::size_t n_features) const;
};

struct GridRow {
  ParamCell params;
  CvResult cv;
};

struct GridSearchResult {
  FoldPlan plan;
  std::vector<GridRow> rows;
  std::size_t best = 0;

  const GridRow& best_row() const { return rows.at(best); }
};

/// Highest mean accuracy, ties to the smaller ParamCell::key(). nullopt when no row has a mean.
std::optional<std::size_t> select_best(const std::vector<GridRow>& rows);

struct SearchOptions {
  bool stratified = false;
  /// Grid cells evaluated concurrently; results land in fixed slots.
  unsigned workers = 1;
  /// Solver settings shared by every SVM cell (kernel and C are overridden per cell).
  SvmConfig svm;
};

/// Cross-validates every cell against one shared FoldPlan. Throws DataError if every cell failed.
GridSearchResult grid_search(const LabeledDataset& ds, const ParamGrid& grid, std::size_t k, std::uint64_t seed,
                             const SearchOptions& options = {});

/// A trained model of either kind.
struct FittedModel {
  ParamCell params;
  std::variant<SvmModel, LogRegModel> model;

  double decision(std::span<const double> x) const;
  Label predict(std::span<const double> x) const;
  std::size_t dim() const;
};

SvmConfig svm_config_for(const ParamCell& cell, const SvmConfig& base);

/// Fits one cell on the full dataset.
FittedModel fit_cell(const LabeledDataset& ds, const ParamCell& cell, const SvmConfig& svm_base = {});

} // namespace pyroclass
