#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pyroclass/model_select.hpp"
#include "pyroclass/preprocess.hpp"
#include "pyroclass/svm.hpp"

namespace pyroclass {

inline const std::vector<std::uint32_t> kDefaultResolutions{10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 150, 200, 250};

/// One experiment, read from a JSON document. Relative paths resolve against the config file's directory.
///
/// {
///   "train_root": "data/train",
///   "test_roots": {"balanced": "data/test"},
///   "positive_dir": "fire", "negative_dir": "nofire",
///   "resolutions": [10, 20, 30],
///   "models": ["logreg", "svm-sigmoid", "svm-poly", "svm-gaussian"],
///   "grids": {
///     "C": [0.1, 1, 10, 100],
///     "poly": {"degree": [2, 3, 4], "offset": [0, 1]},
///     "gaussian": {"gamma": ["1/d", 0.01, 0.1, 1]},
///     "sigmoid": {"alpha": ["1/d", 0.01], "beta": [0, -1]},
///     "logreg": {"lambda": [1e-4], "learning_rate": 0.1, "iterations": 2000}
///   },
///   "folds": 4, "seed": 0, "stratified": false,
///   "augmentation": {"flip": true, "median_blur": true, "blur_window": 3},
///   "svm": {"kkt_tol": 1e-3, "eps": 1e-12, "max_passes": 5, "max_iter": 0},
///   "output_dir": "out", "gram_cache_budget_bytes": 2147483648, "workers": 1
/// }
struct ExperimentConfig {
  std::filesystem::path train_root;
  /// Ordered by name.
  std::vector<std::pair<std::string, std::filesystem::path>> test_roots;
  std::string positive_dir = "fire";
  std::string negative_dir = "nofire";
  /// Sorted ascending, unique.
  std::vector<std::uint32_t> resolutions = kDefaultResolutions;
  std::vector<ModelFamily> models{kAllModels.begin(), kAllModels.end()};
  std::map<ModelFamily, ParamGrid> grids;
  std::size_t folds = 4;
  std::uint64_t seed = 0;
  bool stratified = false;
  AugmentPlan augmentation;
  SvmConfig svm;
  std::filesystem::path output_dir = "out";
  std::size_t gram_cache_budget_bytes = std::size_t{2} << 30;
  unsigned workers = 1;
  /// SHA-256 (hex) of the normalized config document.
  std::string hash;

  const ParamGrid& grid(ModelFamily family) const { return grids.at(family); }
  /// SVM solver settings with the cache budget applied.
  SvmConfig solver() const;
  void validate() const;
};

/// Throws ConfigError on malformed documents or invalid values.
ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Worker count after applying the PYROCLASS_WORKERS override.
unsigned effective_workers(unsigned configured);

} // namespace pyroclass
