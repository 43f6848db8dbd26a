#include "pyroclass/model_select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "parallel.hpp"
#include "pyroclass/rng.hpp"

namespace pyroclass {

std::string_view model_name(ModelFamily family) {
  switch (family) {
  case ModelFamily::logreg:
    return "logreg";
  case ModelFamily::svm_sigmoid:
    return "svm-sigmoid";
  case ModelFamily::svm_poly:
    return "svm-poly";
  case ModelFamily::svm_gaussian:
    return "svm-gaussian";
  }
  return "?";
}

ModelFamily parse_model_name(std::string_view name) {
  for (ModelFamily f : kAllModels)
    if (model_name(f) == name)
      return f;
  std::string valid;
  for (ModelFamily f : kAllModels)
    valid += (valid.empty() ? "" : ", ") + std::string(model_name(f));
  throw ConfigError("unknown model '" + std::string(name) + "' (valid: " + valid + ")");
}

// ---------------------------------------------------------------------------
// Folds

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] != fold)
      out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldPlan::validation_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] == fold)
      out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldPlan::fold_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t f : assignment)
    ++sizes[f];
  return sizes;
}

namespace {

void check_fold_args(std::size_t n, std::size_t k) {
  if (k < 2)
    throw ConfigError("k-fold split needs k >= 2, got " + std::to_string(k));
  if (n < k)
    throw ConfigError("k-fold split needs n >= k (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
}

} // namespace

FoldPlan kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
  check_fold_args(n, k);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Xoshiro256 rng(seed);
  shuffle(order, rng);
  FoldPlan plan{k, std::vector<std::size_t>(n), false};
  for (std::size_t p = 0; p < n; ++p)
    plan.assignment[order[p]] = p % k;
  return plan;
}

FoldPlan kfold_split_stratified(std::span<const Label> labels, std::size_t k, std::uint64_t seed) {
  check_fold_args(labels.size(), k);
  Xoshiro256 rng(seed);
  FoldPlan plan{k, std::vector<std::size_t>(labels.size()), true};
  std::size_t counter = 0;
  for (Label cls : {Label{1}, Label{-1}}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls)
        members.push_back(i);
    shuffle(members, rng);
    for (std::size_t idx : members)
      plan.assignment[idx] = counter++ % k;
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Cross-validation

std::size_t CvResult::failed() const {
  return static_cast<std::size_t>(std::count(fold_accuracy.begin(), fold_accuracy.end(), std::nullopt));
}

namespace {

// fit_predict(train_idx, val_idx) returns predictions for val_idx in order.
template <typename FitPredict>
CvResult run_folds(const LabeledDataset& ds, const FoldPlan& plan, FitPredict&& fit_predict) {
  if (plan.assignment.size() != ds.size())
    throw DimensionError("fold plan covers " + std::to_string(plan.assignment.size()) + " samples, dataset has " +
                         std::to_string(ds.size()));
  CvResult result;
  result.fold_accuracy.resize(plan.k);
  result.fold_errors.resize(plan.k);
  double sum = 0.0;
  std::size_t ok = 0;
  for (std::size_t f = 0; f < plan.k; ++f) {
    const auto train = plan.train_indices(f);
    const auto val = plan.validation_indices(f);
    try {
      const std::vector<Label> pred = fit_predict(train, val);
      std::size_t correct = 0;
      for (std::size_t t = 0; t < val.size(); ++t)
        correct += pred[t] == ds.labels[val[t]];
      const double acc = static_cast<double>(correct) / static_cast<double>(val.size());
      result.fold_accuracy[f] = acc;
      sum += acc;
      ++ok;
    } catch (const DataError& e) {
      result.fold_errors[f] = e.what();
    }
  }
  if (ok > 0)
    result.mean = sum / static_cast<double>(ok);
  return result;
}

} // namespace

CvResult cross_validate(const LabeledDataset& ds, const Trainer& trainer, const FoldPlan& plan) {
  return run_folds(ds, plan, [&](const std::vector<std::size_t>& train, const std::vector<std::size_t>& val) {
    const Predictor predict = trainer(ds.subset(train));
    std::vector<Label> out;
    out.reserve(val.size());
    for (std::size_t v : val)
      out.push_back(predict(ds.row(v)));
    return out;
  });
}

CvResult cross_validate(const LabeledDataset& ds, const Trainer& trainer, std::size_t k, std::uint64_t seed,
                        bool stratified) {
  const FoldPlan plan = stratified ? kfold_split_stratified(ds.labels, k, seed) : kfold_split(ds.size(), k, seed);
  return cross_validate(ds, trainer, plan);
}

// ---------------------------------------------------------------------------
// Grids

std::string ScaledValue::to_string() const {
  if (inverse_dim)
    return "1/d";
  std::ostringstream os;
  os << value;
  return os.str();
}

std::string ParamCell::describe() const {
  std::ostringstream os;
  if (family == ModelFamily::logreg) {
    os << "lambda=" << logreg.lambda << " lr=" << logreg.learning_rate << " iters=" << logreg.iterations;
  } else {
    os << "C=" << C << " " << pyroclass::describe(kernel);
  }
  return os.str();
}

std::array<double, 4> ParamCell::key() const {
  std::array<double, 4> k{C, 0.0, 0.0, logreg.lambda};
  if (const auto* p = std::get_if<PolynomialKernel>(&kernel)) {
    k[1] = p->c;
    k[2] = p->d;
  } else if (const auto* g = std::get_if<GaussianKernel>(&kernel)) {
    k[1] = g->gamma;
  } else if (const auto* s = std::get_if<SigmoidKernel>(&kernel)) {
    k[1] = s->alpha;
    k[2] = s->beta;
  }
  return k;
}

ParamGrid ParamGrid::defaults(ModelFamily family) {
  ParamGrid g;
  g.family = family;
  return g;
}

std::vector<ParamCell> ParamGrid::expand(std::size_t n_features) const {
  std::vector<ParamCell> cells;
  if (family == ModelFamily::logreg) {
    for (double lambda : lambdas) {
      ParamCell c{family, 0.0, LinearKernel{}, logreg};
      c.logreg.lambda = lambda;
      c.logreg.validate();
      cells.push_back(c);
    }
  } else {
    for (double box : C) {
      if (!(box > 0.0))
        throw ConfigError("grid C values must be positive");
      auto push = [&](KernelSpec k) {
        validate(k);
        cells.push_back({family, box, k, logreg});
      };
      switch (family) {
      case ModelFamily::svm_poly:
        for (double c : offsets)
          for (int d : degrees)
            push(PolynomialKernel{c, d});
        break;
      case ModelFamily::svm_gaussian:
        for (const auto& gamma : gammas)
          push(GaussianKernel{gamma.resolve(n_features)});
        break;
      case ModelFamily::svm_sigmoid:
        for (const auto& alpha : alphas)
          for (double beta : betas)
            push(SigmoidKernel{alpha.resolve(n_features), beta});
        break;
      case ModelFamily::logreg:
        break;
      }
    }
  }
  if (cells.empty())
    throw ConfigError("parameter grid for " + std::string(model_name(family)) + " is empty");
  return cells;
}

std::optional<std::size_t> select_best(const std::vector<GridRow>& rows) {
  std::optional<std::size_t> best;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].cv.mean)
      continue;
    if (!best) {
      best = r;
      continue;
    }
    const double m = *rows[r].cv.mean;
    const double bm = *rows[*best].cv.mean;
    if (m > bm || (m == bm && rows[r].params.key() < rows[*best].params.key()))
      best = r;
  }
  return best;
}

SvmConfig svm_config_for(const ParamCell& cell, const SvmConfig& base) {
  SvmConfig cfg = base;
  cfg.kernel = cell.kernel;
  cfg.C = cell.C;
  return cfg;
}

namespace {

std::vector<Label> gather_labels(const LabeledDataset& ds, const std::vector<std::size_t>& idx) {
  std::vector<Label> out;
  out.reserve(idx.size());
  for (std::size_t i : idx)
    out.push_back(ds.labels[i]);
  return out;
}

// Folds of one SVM cell share the Gram matrix of the whole training set.
CvResult cross_validate_svm(const LabeledDataset& ds, const FoldPlan& plan, const SvmConfig& cfg) {
  const Matrix g = gram(cfg.kernel, ds.features, cfg.threads);
  return run_folds(ds, plan, [&](const std::vector<std::size_t>& train, const std::vector<std::size_t>& val) {
    GramRows rows(g, train);
    const auto labels = gather_labels(ds, train);
    const DualSolution sol = solve_dual(rows, labels, cfg);
    std::vector<Label> out;
    out.reserve(val.size());
    for (std::size_t v : val) {
      double f = 0.0;
      for (std::size_t t = 0; t < train.size(); ++t)
        if (sol.alphas[t] > kSupportThreshold)
          f += sol.alphas[t] * labels[t] * g(train[t], v);
      out.push_back(f + sol.bias >= 0.0 ? Label{1} : Label{-1});
    }
    return out;
  });
}

CvResult cross_validate_cell(const LabeledDataset& ds, const FoldPlan& plan, const ParamCell& cell,
                             const SvmConfig& svm_base) {
  if (cell.family == ModelFamily::logreg) {
    const Trainer trainer = [&](const LabeledDataset& train) -> Predictor {
      auto model = std::make_shared<LogRegModel>(train_gd(train, cell.logreg));
      return [model](std::span<const double> x) { return model->predict(x); };
    };
    return cross_validate(ds, trainer, plan);
  }
  return cross_validate_svm(ds, plan, svm_config_for(cell, svm_base));
}

} // namespace

GridSearchResult grid_search(const LabeledDataset& ds, const ParamGrid& grid, std::size_t k, std::uint64_t seed,
                             const SearchOptions& options) {
  const auto cells = grid.expand(ds.dim());
  GridSearchResult result;
  result.plan = options.stratified ? kfold_split_stratified(ds.labels, k, seed) : kfold_split(ds.size(), k, seed);
  result.rows.resize(cells.size());
  detail::parallel_for(cells.size(), options.workers, [&](std::size_t c) {
    result.rows[c] = {cells[c], cross_validate_cell(ds, result.plan, cells[c], options.svm)};
  });
  const auto best = select_best(result.rows);
  if (!best) {
    std::string why = result.rows.empty() ? "" : result.rows.front().cv.fold_errors.front();
    throw DataError("grid search: every cell failed" + (why.empty() ? "" : " (first error: " + why + ")"));
  }
  result.best = *best;
  return result;
}

// ---------------------------------------------------------------------------
// Fitted models

double FittedModel::decision(std::span<const double> x) const {
  return std::visit([&](const auto& m) { return m.decision(x); }, model);
}

Label FittedModel::predict(std::span<const double> x) const {
  return std::visit([&](const auto& m) { return m.predict(x); }, model);
}

std::size_t FittedModel::dim() const {
  return std::visit([](const auto& m) { return m.dim(); }, model);
}

FittedModel fit_cell(const LabeledDataset& ds, const ParamCell& cell, const SvmConfig& svm_base) {
  if (cell.family == ModelFamily::logreg)
    return {cell, train_gd(ds, cell.logreg)};
  return {cell, train_smo(ds, svm_config_for(cell, svm_base))};
}

} // namespace pyroclass
