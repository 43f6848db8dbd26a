#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "pyroclass/dataset.hpp"
#include "pyroclass/kernels.hpp"
#include "pyroclass/matrix.hpp"

namespace pyroclass {

struct SvmConfig {
  KernelSpec kernel = GaussianKernel{};
  double C = 1.0;
  /// Stop once the maximal KKT violation (m(a) - M(a)) drops to this value.
  double kkt_tol = 1e-3;
  /// Two-variable steps shorter than this count as "no change".
  double eps = 1e-12;
  /// Consecutive no-change steps tolerated before giving up.
  std::size_t max_passes = 5;
  /// Hard cap on SMO steps; 0 selects 1000 * n.
  std::size_t max_iter = 0;
  /// The Gram matrix is materialized when n*n*8 bytes fit, otherwise rows go through an LRU cache.
  std::size_t cache_budget_bytes = std::size_t{2} << 30;
  /// Workers for Gram construction.
  unsigned threads = 1;

  void validate() const;
};

struct TrainingMeta {
  std::size_t iterations = 0;
  /// Dual objective W(alpha) at return.
  double objective = 0.0;
  /// Final m(a) - M(a).
  double kkt_gap = 0.0;
  bool converged = false;
  bool full_gram = true;
};

/// Raw dual solution over the training rows.
struct DualSolution {
  std::vector<double> alphas;
  double bias = 0.0;
  TrainingMeta meta;
};

class SvmModel {
public:
  SvmModel() = default;
  SvmModel(Matrix support_vectors, std::vector<double> dual_coefs, double bias, KernelSpec kernel,
           TrainingMeta meta = {});

  /// f(x) = sum_i coef_i K(sv_i, x) + bias.
  double decision(std::span<const double> x) const;
  /// +1 when decision(x) >= 0, else -1.
  Label predict(std::span<const double> x) const;

  const Matrix& support_vectors() const { return support_vectors_; }
  /// alpha_i * y_i per retained support vector.
  const std::vector<double>& dual_coefs() const { return dual_coefs_; }
  double bias() const { return bias_; }
  const KernelSpec& kernel() const { return kernel_; }
  const TrainingMeta& meta() const { return meta_; }
  /// Feature dimension, 0 for an empty support set.
  std::size_t dim() const { return support_vectors_.cols(); }

private:
  Matrix support_vectors_;
  std::vector<double> dual_coefs_;
  double bias_ = 0.0;
  KernelSpec kernel_;
  TrainingMeta meta_;
};

/// Alphas at or below this are dropped when extracting support vectors.
inline constexpr double kSupportThreshold = 1e-9;

/// Source of kernel rows K(i, .) for the solver.
class KernelRows {
public:
  virtual ~KernelRows() = default;
  virtual std::size_t size() const = 0;
  virtual double diag(std::size_t i) const = 0;
  /// Valid until the next call to row().
  virtual std::span<const double> row(std::size_t i) = 0;
};

/// Rows read from a materialized Gram matrix, optionally restricted to a subset of its indices.
class GramRows final : public KernelRows {
public:
  explicit GramRows(const Matrix& gram);
  GramRows(const Matrix& gram, std::vector<std::size_t> subset);
  std::size_t size() const override { return index_.empty() ? gram_->rows() : index_.size(); }
  double diag(std::size_t i) const override;
  std::span<const double> row(std::size_t i) override;

private:
  const Matrix* gram_;
  std::vector<std::size_t> index_;
  std::vector<double> buffer_;
};

/// Rows evaluated on demand and kept in a least-recently-used cache of `capacity` rows.
class CachedKernelRows final : public KernelRows {
public:
  CachedKernelRows(const KernelSpec& spec, const Matrix& X, std::size_t capacity);
  ~CachedKernelRows() override;
  std::size_t size() const override;
  double diag(std::size_t i) const override;
  std::span<const double> row(std::size_t i) override;
  std::size_t evaluations() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Soft-margin dual by SMO: maximal-violating-pair working sets, alternating between
/// non-bound and full candidate sets, with the gradient kept as the error cache.
/// Deterministic for a given row order. Throws SingleClassError when only one label occurs.
DualSolution solve_dual(KernelRows& rows, std::span<const Label> labels, const SvmConfig& cfg);

/// Trains on ds. Diagnostics for a hit iteration cap are in meta() (converged == false).
SvmModel train_smo(const LabeledDataset& ds, const SvmConfig& cfg);
/// Same, reusing a Gram matrix already computed for ds with cfg.kernel.
SvmModel train_smo(const LabeledDataset& ds, const Matrix& gram, const SvmConfig& cfg);

/// Builds the model from a dual solution, dropping alphas <= kSupportThreshold.
SvmModel make_model(const LabeledDataset& ds, const DualSolution& sol, const KernelSpec& kernel);

/// W(alpha) = sum alpha_i - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
double dual_objective(std::span<const double> alphas, std::span<const Label> labels, const Matrix& gram);

// SVMM: "SVMM", u32 version (1), u32 kernel tag, f64 p0, f64 p1, u64 m, u64 d, f64 bias,
// m x f64 dual coefs, m*d x f64 support vectors. Params: polynomial (c, d), gaussian (gamma, 0),
// sigmoid (alpha, beta), linear (0, 0).
void save_model(const SvmModel& model, const std::filesystem::path& path);
SvmModel load_svm_model(const std::filesystem::path& path);

} // namespace pyroclass
