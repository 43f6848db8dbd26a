#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>

#include "pyroclass/matrix.hpp"

namespace pyroclass {

/// K(x, z) = x.z
struct LinearKernel {
  friend bool operator==(const LinearKernel&, const LinearKernel&) = default;
};

/// K(x, z) = (x.z + c)^d with c >= 0 and integer d >= 1.
struct PolynomialKernel {
  double c = 1.0;
  int d = 2;
  friend bool operator==(const PolynomialKernel&, const PolynomialKernel&) = default;
};

/// K(x, z) = exp(-gamma * |x - z|^2). The sigma form maps as gamma = 1 / (2 sigma^2).
struct GaussianKernel {
  double gamma = 1.0;
  static GaussianKernel from_sigma(double sigma) { return {1.0 / (2.0 * sigma * sigma)}; }
  friend bool operator==(const GaussianKernel&, const GaussianKernel&) = default;
};

/// K(x, z) = tanh(alpha * x.z + beta). Not positive semidefinite in general.
struct SigmoidKernel {
  double alpha = 1.0;
  double beta = 0.0;
  friend bool operator==(const SigmoidKernel&, const SigmoidKernel&) = default;
};

using KernelSpec = std::variant<LinearKernel, PolynomialKernel, GaussianKernel, SigmoidKernel>;

/// Stable numeric tag used by the model file format: linear 0, polynomial 1, gaussian 2, sigmoid 3.
inline std::uint32_t kernel_tag(const KernelSpec& spec) { return static_cast<std::uint32_t>(spec.index()); }

/// Throws ConfigError when the hyperparameters break the kernel's invariants.
void validate(const KernelSpec& spec);

/// Human-readable form, e.g. "gaussian(gamma=0.1)".
std::string describe(const KernelSpec& spec);

/// Dot product accumulated strictly left to right.
double dot(std::span<const double> x, std::span<const double> y);
double squared_distance(std::span<const double> x, std::span<const double> y);

/// Throws DimensionError when x and y differ in length.
double eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

/// n x n Gram matrix. Each unordered pair is evaluated once and mirrored.
/// Rows are split across `threads` workers; output is independent of the count.
Matrix gram(const KernelSpec& spec, const Matrix& X, unsigned threads = 1);

/// n x m matrix G(i, j) = K(X_i, Z_j).
Matrix gram_cross(const KernelSpec& spec, const Matrix& X, const Matrix& Z);

} // namespace pyroclass
