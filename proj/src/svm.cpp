#include "pyroclass/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

#include "binary_io.hpp"
#include "pyroclass/error.hpp"

namespace pyroclass {

void SvmConfig::validate() const {
  pyroclass::validate(kernel);
  if (!(C > 0.0) || !std::isfinite(C))
    throw ConfigError("SVM box constraint C must be positive");
  if (!(kkt_tol > 0.0))
    throw ConfigError("SVM kkt_tol must be positive");
  if (!(eps >= 0.0))
    throw ConfigError("SVM eps must be non-negative");
  if (max_passes == 0)
    throw ConfigError("SVM max_passes must be >= 1");
}

SvmModel::SvmModel(Matrix support_vectors, std::vector<double> dual_coefs, double bias, KernelSpec kernel,
                   TrainingMeta meta)
    : support_vectors_(std::move(support_vectors)), dual_coefs_(std::move(dual_coefs)), bias_(bias),
      kernel_(kernel), meta_(meta) {
  if (support_vectors_.rows() != dual_coefs_.size())
    throw DataError("support vector count does not match coefficient count");
}

double SvmModel::decision(std::span<const double> x) const {
  if (!dual_coefs_.empty() && x.size() != dim())
    throw DimensionError("decision: input has " + std::to_string(x.size()) + " features, model expects " +
                         std::to_string(dim()));
  double f = 0.0;
  for (std::size_t i = 0; i < dual_coefs_.size(); ++i)
    f += dual_coefs_[i] * eval(kernel_, support_vectors_.row(i), x);
  return f + bias_;
}

Label SvmModel::predict(std::span<const double> x) const { return decision(x) >= 0.0 ? Label{1} : Label{-1}; }

// ---------------------------------------------------------------------------
// Kernel row sources

GramRows::GramRows(const Matrix& gram) : gram_(&gram) {}

GramRows::GramRows(const Matrix& gram, std::vector<std::size_t> subset)
    : gram_(&gram), index_(std::move(subset)), buffer_(index_.size()) {}

double GramRows::diag(std::size_t i) const {
  const std::size_t k = index_.empty() ? i : index_[i];
  return (*gram_)(k, k);
}

std::span<const double> GramRows::row(std::size_t i) {
  if (index_.empty())
    return gram_->row(i);
  const auto src = gram_->row(index_[i]);
  for (std::size_t t = 0; t < index_.size(); ++t)
    buffer_[t] = src[index_[t]];
  return buffer_;
}

struct CachedKernelRows::Impl {
  const KernelSpec spec;
  const Matrix& X;
  const std::size_t capacity;
  std::vector<double> diag;
  std::list<std::pair<std::size_t, std::vector<double>>> lru;
  std::unordered_map<std::size_t, decltype(lru)::iterator> where;
  std::size_t evaluations = 0;
};

CachedKernelRows::CachedKernelRows(const KernelSpec& spec, const Matrix& X, std::size_t capacity)
    : impl_(new Impl{spec, X, std::max<std::size_t>(capacity, 2), {}, {}, {}, 0}) {
  impl_->diag.resize(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i)
    impl_->diag[i] = eval(spec, X.row(i), X.row(i));
}

CachedKernelRows::~CachedKernelRows() = default;

std::size_t CachedKernelRows::size() const { return impl_->X.rows(); }
double CachedKernelRows::diag(std::size_t i) const { return impl_->diag[i]; }
std::size_t CachedKernelRows::evaluations() const { return impl_->evaluations; }

std::span<const double> CachedKernelRows::row(std::size_t i) {
  auto& s = *impl_;
  if (auto it = s.where.find(i); it != s.where.end()) {
    s.lru.splice(s.lru.begin(), s.lru, it->second);
    return s.lru.front().second;
  }
  std::vector<double> values;
  if (s.lru.size() >= s.capacity) {
    auto& victim = s.lru.back();
    s.where.erase(victim.first);
    values = std::move(victim.second);
    s.lru.pop_back();
  }
  values.resize(s.X.rows());
  for (std::size_t t = 0; t < s.X.rows(); ++t)
    values[t] = eval(s.spec, s.X.row(i), s.X.row(t));
  ++s.evaluations;
  s.lru.emplace_front(i, std::move(values));
  s.where[i] = s.lru.begin();
  return s.lru.front().second;
}

// ---------------------------------------------------------------------------
// SMO

namespace {

constexpr double kTau = 1e-12;

struct Pair {
  std::size_t i = 0;
  std::size_t j = 0;
  double gap = -std::numeric_limits<double>::infinity();
};

} // namespace

DualSolution solve_dual(KernelRows& rows, std::span<const Label> labels, const SvmConfig& cfg) {
  cfg.validate();
  const std::size_t n = rows.size();
  if (labels.size() != n)
    throw DimensionError("solve_dual: " + std::to_string(labels.size()) + " labels for " + std::to_string(n) +
                         " kernel rows");
  const auto positives = std::count(labels.begin(), labels.end(), Label{1});
  const auto negatives = std::count(labels.begin(), labels.end(), Label{-1});
  if (positives + negatives != static_cast<std::ptrdiff_t>(n))
    throw DataError("labels must be +1 or -1");
  if (positives == 0 || negatives == 0)
    throw SingleClassError("SVM training needs both classes (got " + std::to_string(positives) + " positive, " +
                           std::to_string(negatives) + " negative)");

  const double C = cfg.C;
  const std::size_t max_iter = cfg.max_iter ? cfg.max_iter : 1000 * n;
  std::vector<double> a(n, 0.0);
  // Gradient of 1/2 a'Qa - e'a with Q_ij = y_i y_j K_ij; doubles as the error cache.
  std::vector<double> grad(n, -1.0);
  std::vector<double> ki(n);

  auto y = [&](std::size_t t) { return static_cast<double>(labels[t]); };
  auto in_up = [&](std::size_t t) { return labels[t] > 0 ? a[t] < C : a[t] > 0.0; };
  auto in_low = [&](std::size_t t) { return labels[t] > 0 ? a[t] > 0.0 : a[t] < C; };
  auto is_free = [&](std::size_t t) { return a[t] > 0.0 && a[t] < C; };

  auto select = [&](bool full) {
    Pair p;
    double up_max = -std::numeric_limits<double>::infinity();
    double low_min = std::numeric_limits<double>::infinity();
    bool have_up = false, have_low = false;
    for (std::size_t t = 0; t < n; ++t) {
      if (!full && !is_free(t))
        continue;
      const double v = -y(t) * grad[t];
      if (in_up(t) && v > up_max) {
        up_max = v;
        p.i = t;
        have_up = true;
      }
      if (in_low(t) && v < low_min) {
        low_min = v;
        p.j = t;
        have_low = true;
      }
    }
    if (have_up && have_low)
      p.gap = up_max - low_min;
    return p;
  };

  DualSolution sol;
  bool full = true;
  std::size_t stalls = 0;
  std::size_t iter = 0;
  bool converged = false;

  while (true) {
    const Pair p = select(full);
    if (!(p.gap > cfg.kkt_tol)) {
      if (full) {
        converged = true;
        break;
      }
      full = true;
      continue;
    }
    if (iter >= max_iter)
      break;
    ++iter;

    const std::size_t i = p.i, j = p.j;
    const auto row_i = rows.row(i);
    std::copy(row_i.begin(), row_i.end(), ki.begin());
    const auto kj = rows.row(j);

    double eta = rows.diag(i) + rows.diag(j) - 2.0 * ki[j];
    if (eta <= 0.0)
      eta = kTau;
    // Move along a_i += y_i*step, a_j -= y_j*step, which keeps sum(a*y) fixed.
    const double bound_i = labels[i] > 0 ? C - a[i] : a[i];
    const double bound_j = labels[j] > 0 ? a[j] : C - a[j];
    const double step = std::min({p.gap / eta, bound_i, bound_j});

    const double ai = step == bound_i ? (labels[i] > 0 ? C : 0.0) : a[i] + y(i) * step;
    const double aj = step == bound_j ? (labels[j] > 0 ? 0.0 : C) : a[j] - y(j) * step;
    const double di = ai - a[i];
    const double dj = aj - a[j];
    a[i] = ai;
    a[j] = aj;
    for (std::size_t t = 0; t < n; ++t)
      grad[t] += y(t) * (y(i) * di * ki[t] + y(j) * dj * kj[t]);

    if (step < cfg.eps) {
      if (++stalls >= cfg.max_passes)
        break;
      full = true;
    } else {
      stalls = 0;
      full = false;
    }
  }

  sol.meta.iterations = iter;
  sol.meta.converged = converged;
  sol.meta.kkt_gap = std::max(0.0, select(true).gap);

  // Bias: mean of y_t - g(x_t) over free vectors, else the midpoint of the bound-implied interval.
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    const double v = -y(t) * grad[t];
    if (is_free(t)) {
      free_sum += v;
      ++free_count;
    } else if (in_up(t)) {
      lower = std::max(lower, v);
    } else {
      upper = std::min(upper, v);
    }
  }
  if (free_count > 0)
    sol.bias = free_sum / static_cast<double>(free_count);
  else if (std::isfinite(lower) && std::isfinite(upper))
    sol.bias = 0.5 * (lower + upper);
  else
    sol.bias = std::isfinite(lower) ? lower : upper;

  double w = 0.0;
  for (std::size_t t = 0; t < n; ++t)
    w += a[t] * (1.0 - grad[t]);
  sol.meta.objective = 0.5 * w;
  sol.alphas = std::move(a);
  return sol;
}

SvmModel make_model(const LabeledDataset& ds, const DualSolution& sol, const KernelSpec& kernel) {
  Matrix sv(0, ds.dim());
  std::vector<double> coefs;
  for (std::size_t t = 0; t < sol.alphas.size(); ++t) {
    if (sol.alphas[t] <= kSupportThreshold)
      continue;
    sv.append_row(ds.row(t));
    coefs.push_back(sol.alphas[t] * ds.labels[t]);
  }
  return SvmModel(std::move(sv), std::move(coefs), sol.bias, kernel, sol.meta);
}

namespace {

void check_training_set(const LabeledDataset& ds) {
  if (ds.size() < 2)
    throw DataError("SVM training needs at least 2 samples");
  if (ds.features.rows() != ds.size())
    throw DataError("dataset rows and labels differ in count");
}

} // namespace

SvmModel train_smo(const LabeledDataset& ds, const SvmConfig& cfg) {
  cfg.validate();
  check_training_set(ds);
  const std::size_t n = ds.size();
  if (n * n * sizeof(double) <= cfg.cache_budget_bytes) {
    const Matrix g = gram(cfg.kernel, ds.features, cfg.threads);
    return train_smo(ds, g, cfg);
  }
  CachedKernelRows rows(cfg.kernel, ds.features, cfg.cache_budget_bytes / (n * sizeof(double)));
  auto sol = solve_dual(rows, ds.labels, cfg);
  sol.meta.full_gram = false;
  return make_model(ds, sol, cfg.kernel);
}

SvmModel train_smo(const LabeledDataset& ds, const Matrix& gram, const SvmConfig& cfg) {
  check_training_set(ds);
  if (gram.rows() != ds.size() || gram.cols() != ds.size())
    throw DimensionError("precomputed Gram matrix does not match the dataset size");
  GramRows rows(gram);
  const auto sol = solve_dual(rows, ds.labels, cfg);
  return make_model(ds, sol, cfg.kernel);
}

double dual_objective(std::span<const double> alphas, std::span<const Label> labels, const Matrix& gram) {
  const std::size_t n = alphas.size();
  if (labels.size() != n || gram.rows() != n || gram.cols() != n)
    throw DimensionError("dual_objective: inconsistent shapes");
  double linear = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    linear += alphas[i];
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      s += alphas[j] * labels[j] * gram(i, j);
    quad += alphas[i] * labels[i] * s;
  }
  return linear - 0.5 * quad;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::pair<double, double> kernel_params(const KernelSpec& spec) {
  switch (spec.index()) {
  case 1: {
    const auto& k = std::get<PolynomialKernel>(spec);
    return {k.c, static_cast<double>(k.d)};
  }
  case 2:
    return {std::get<GaussianKernel>(spec).gamma, 0.0};
  case 3: {
    const auto& k = std::get<SigmoidKernel>(spec);
    return {k.alpha, k.beta};
  }
  default:
    return {0.0, 0.0};
  }
}

KernelSpec kernel_from(std::uint32_t tag, double p0, double p1, const std::filesystem::path& path) {
  switch (tag) {
  case 0:
    return LinearKernel{};
  case 1:
    return PolynomialKernel{p0, static_cast<int>(p1)};
  case 2:
    return GaussianKernel{p0};
  case 3:
    return SigmoidKernel{p0, p1};
  default:
    throw DataError(path.string() + ": unknown kernel tag " + std::to_string(tag));
  }
}

} // namespace

void save_model(const SvmModel& model, const std::filesystem::path& path) {
  detail::BinaryWriter out(path);
  out.magic("SVMM");
  out.uint<std::uint32_t>(1);
  out.uint<std::uint32_t>(kernel_tag(model.kernel()));
  const auto [p0, p1] = kernel_params(model.kernel());
  out.f64(p0);
  out.f64(p1);
  out.uint<std::uint64_t>(model.dual_coefs().size());
  out.uint<std::uint64_t>(model.dim());
  out.f64(model.bias());
  out.f64s(model.dual_coefs());
  out.f64s(model.support_vectors().data());
  out.finish();
}

SvmModel load_svm_model(const std::filesystem::path& path) {
  detail::BinaryReader in(path);
  if (!in.magic("SVMM"))
    throw DataError(path.string() + ": bad magic (not an SVMM model file)");
  const auto version = in.uint<std::uint32_t>();
  if (version != 1)
    throw DataError(path.string() + ": unsupported SVMM version " + std::to_string(version));
  const auto tag = in.uint<std::uint32_t>();
  const double p0 = in.f64();
  const double p1 = in.f64();
  const KernelSpec kernel = kernel_from(tag, p0, p1, path);
  const auto m = in.uint<std::uint64_t>();
  const auto d = in.uint<std::uint64_t>();
  const double bias = in.f64();
  auto coefs = in.f64s(m);
  if (d != 0 && m > std::numeric_limits<std::uint64_t>::max() / d)
    throw DataError(path.string() + ": truncated payload");
  Matrix sv(m, d, in.f64s(m * d));
  return SvmModel(std::move(sv), std::move(coefs), bias, kernel);
}

} // namespace pyroclass
