#include "pyroclass/logreg.hpp"

#include <cmath>

#include "binary_io.hpp"
#include "pyroclass/kernels.hpp"

namespace pyroclass {

namespace {

double sigmoid(double z) {
  if (z >= 0.0)
    return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(t)) without overflow.
double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

void check_dim(std::size_t got, std::size_t want) {
  if (got != want)
    throw DimensionError("logistic regression: input has " + std::to_string(got) + " features, model expects " +
                         std::to_string(want));
}

} // namespace

void LogRegConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw ConfigError("logistic regression learning_rate must be positive");
  if (iterations < 1)
    throw ConfigError("logistic regression iterations must be >= 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ConfigError("logistic regression lambda must be >= 0");
}

double LogRegModel::decision(std::span<const double> x) const {
  check_dim(x.size(), weights.size());
  return dot(weights, x) + bias;
}

double LogRegModel::predict_proba(std::span<const double> x) const { return sigmoid(decision(x)); }

Label LogRegModel::predict(std::span<const double> x) const { return predict_proba(x) >= 0.5 ? Label{1} : Label{-1}; }

LossAndGrad loss_and_grad(std::span<const double> weights, double bias, const LabeledDataset& ds, double lambda) {
  const std::size_t d = weights.size();
  if (ds.size() > 0)
    check_dim(ds.dim(), d);
  LossAndGrad out;
  out.grad_w.assign(d, 0.0);
  const std::size_t n = ds.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = ds.row(i);
    const double z = dot(weights, x) + bias;
    const double y = ds.labels[i];
    // -log sigmoid(y z) covers both label cases.
    out.loss += softplus(-y * z);
    const double residual = sigmoid(z) - (y > 0 ? 1.0 : 0.0);
    for (std::size_t k = 0; k < d; ++k)
      out.grad_w[k] += residual * x[k];
    out.grad_b += residual;
  }
  if (n > 0) {
    const double inv = 1.0 / static_cast<double>(n);
    out.loss *= inv;
    out.grad_b *= inv;
    for (auto& g : out.grad_w)
      g *= inv;
  }
  double sq = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    sq += weights[k] * weights[k];
    out.grad_w[k] += lambda * weights[k];
  }
  out.loss += 0.5 * lambda * sq;
  return out;
}

LogRegModel train_gd(const LabeledDataset& ds, const LogRegConfig& cfg) {
  cfg.validate();
  if (ds.size() < 1)
    throw DataError("logistic regression needs at least one sample");
  LogRegModel model;
  model.weights.assign(ds.dim(), 0.0);
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    const auto lg = loss_and_grad(model.weights, model.bias, ds, cfg.lambda);
    if (!std::isfinite(lg.loss))
      throw DataError("logistic regression loss became non-finite at iteration " + std::to_string(it));
    for (std::size_t k = 0; k < model.weights.size(); ++k)
      model.weights[k] -= cfg.learning_rate * lg.grad_w[k];
    model.bias -= cfg.learning_rate * lg.grad_b;
  }
  return model;
}

void save_model(const LogRegModel& model, const std::filesystem::path& path) {
  detail::BinaryWriter out(path);
  out.magic("LOGR");
  out.uint<std::uint32_t>(1);
  out.uint<std::uint64_t>(model.weights.size());
  out.f64(model.bias);
  out.f64s(model.weights);
  out.finish();
}

LogRegModel load_logreg_model(const std::filesystem::path& path) {
  detail::BinaryReader in(path);
  if (!in.magic("LOGR"))
    throw DataError(path.string() + ": bad magic (not a LOGR model file)");
  const auto version = in.uint<std::uint32_t>();
  if (version != 1)
    throw DataError(path.string() + ": unsupported LOGR version " + std::to_string(version));
  const auto d = in.uint<std::uint64_t>();
  LogRegModel model;
  model.bias = in.f64();
  model.weights = in.f64s(d);
  return model;
}

} // namespace pyroclass
