#include "pyroclass/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include "pyroclass/error.hpp"

namespace pyroclass {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double eval_unchecked(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  return std::visit(
      overloaded{
          [&](const LinearKernel&) { return dot(x, y); },
          [&](const PolynomialKernel& k) { return std::pow(dot(x, y) + k.c, k.d); },
          [&](const GaussianKernel& k) { return std::exp(-k.gamma * squared_distance(x, y)); },
          [&](const SigmoidKernel& k) { return std::tanh(k.alpha * dot(x, y) + k.beta); },
      },
      spec);
}

} // namespace

void validate(const KernelSpec& spec) {
  std::visit(overloaded{
                 [](const LinearKernel&) {},
                 [](const PolynomialKernel& k) {
                   if (k.d < 1)
                     throw ConfigError("polynomial kernel degree must be >= 1");
                   if (!(k.c >= 0.0))
                     throw ConfigError("polynomial kernel offset c must be >= 0");
                 },
                 [](const GaussianKernel& k) {
                   if (!(k.gamma > 0.0) || !std::isfinite(k.gamma))
                     throw ConfigError("gaussian kernel gamma must be positive");
                 },
                 [](const SigmoidKernel& k) {
                   if (!std::isfinite(k.alpha) || !std::isfinite(k.beta))
                     throw ConfigError("sigmoid kernel parameters must be finite");
                 },
             },
             spec);
}

std::string describe(const KernelSpec& spec) {
  std::ostringstream os;
  os.precision(6);
  std::visit(overloaded{
                 [&](const LinearKernel&) { os << "linear"; },
                 [&](const PolynomialKernel& k) { os << "polynomial(c=" << k.c << ",d=" << k.d << ")"; },
                 [&](const GaussianKernel& k) { os << "gaussian(gamma=" << k.gamma << ")"; },
                 [&](const SigmoidKernel& k) { os << "sigmoid(alpha=" << k.alpha << ",beta=" << k.beta << ")"; },
             },
             spec);
  return os.str();
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    s += x[i] * y[i];
  return s;
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = x[i] - y[i];
    s += diff * diff;
  }
  return s;
}

double eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw DimensionError("kernel arguments differ in length: " + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()));
  return eval_unchecked(spec, x, y);
}

Matrix gram(const KernelSpec& spec, const Matrix& X, unsigned threads) {
  const std::size_t n = X.rows();
  Matrix G(n, n);
  // Row i fills the lower triangle G(i, 0..i); mirroring happens after all rows are done.
  auto fill_rows = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < n; i += stride)
      for (std::size_t j = 0; j <= i; ++j)
        G(i, j) = eval_unchecked(spec, X.row(i), X.row(j));
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    fill_rows(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back(fill_rows, t, threads);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      G(j, i) = G(i, j);
  return G;
}

Matrix gram_cross(const KernelSpec& spec, const Matrix& X, const Matrix& Z) {
  if (X.rows() > 0 && Z.rows() > 0 && X.cols() != Z.cols())
    throw DimensionError("gram_cross: feature dimensions differ: " + std::to_string(X.cols()) + " vs " +
                         std::to_string(Z.cols()));
  Matrix G(X.rows(), Z.rows());
  for (std::size_t i = 0; i < X.rows(); ++i)
    for (std::size_t j = 0; j < Z.rows(); ++j)
      G(i, j) = eval_unchecked(spec, X.row(i), Z.row(j));
  return G;
}

} // namespace pyroclass
