#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "pyroclass/dataset.hpp"

namespace pyroclass {

struct LogRegConfig {
  double learning_rate = 0.1;
  std::size_t iterations = 2000;
  /// L2 strength on the weights; the bias is not penalized.
  double lambda = 1e-4;

  void validate() const;

  friend bool operator==(const LogRegConfig&, const LogRegConfig&) = default;
};

struct LogRegModel {
  std::vector<double> weights;
  double bias = 0.0;

  /// sigmoid(w.x + b)
  double predict_proba(std::span<const double> x) const;
  /// +1 iff predict_proba(x) >= 0.5.
  Label predict(std::span<const double> x) const;
  /// w.x + b, used as the ROC score.
  double decision(std::span<const double> x) const;
  std::size_t dim() const { return weights.size(); }

  friend bool operator==(const LogRegModel&, const LogRegModel&) = default;
};

struct LossAndGrad {
  double loss = 0.0;
  std::vector<double> grad_w;
  double grad_b = 0.0;
};

/// Mean binary log-loss over sigmoid(w.x + b), labels mapped -1 -> 0 and +1 -> 1,
/// plus lambda/2 |w|^2, with its exact gradient.
LossAndGrad loss_and_grad(std::span<const double> weights, double bias, const LabeledDataset& ds, double lambda);

/// Full-batch gradient descent from zero for exactly cfg.iterations steps.
/// Throws DataError naming the iteration if the loss becomes non-finite.
LogRegModel train_gd(const LabeledDataset& ds, const LogRegConfig& cfg);

// LOGR: "LOGR", u32 version (1), u64 d, f64 bias, d x f64 weights.
void save_model(const LogRegModel& model, const std::filesystem::path& path);
LogRegModel load_logreg_model(const std::filesystem::path& path);

} // namespace pyroclass
