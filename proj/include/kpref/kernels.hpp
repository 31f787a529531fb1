#pragma once

#include <string>

#include "kpref/types.hpp"

namespace kpref {

enum class KernelKind { Linear, Rbf, Polynomial };

/// A positive-definite kernel on R^d. Construct through the factories, which
/// validate parameters:
///   - linear():                k(s, t) = s . t
///   - rbf(gamma):              k(s, t) = exp(-gamma * |s - t|^2), gamma > 0
///   - polynomial(deg, coef0):  k(s, t) = (s . t + coef0)^deg,
///                              deg >= 1 integer, coef0 >= 0
struct KernelSpec {
  KernelKind kind = KernelKind::Linear;
  double gamma = 0.0;
  int degree = 0;
  double coef0 = 0.0;

  static KernelSpec linear();
  static KernelSpec rbf(double gamma);
  static KernelSpec polynomial(int degree, double coef0 = 0.0);

  /// Name used in config files and serialized models.
  std::string name() const;
};

/// k(s, t). Throws InputError if s and t differ in dimension.
double kernel_eval(const KernelSpec& spec, const Vector& s, const Vector& t);

/// Gram matrix K with K(i, j) = k(row i, row j) for the rows of `items`
/// (one item per row). Exactly symmetric: each entry is computed once and
/// mirrored. Row-parallel when OpenMP is enabled; entries are independent,
/// so the parallel result is bit-identical to the sequential one.
Matrix gram(const KernelSpec& spec, const Matrix& items);

/// Vector (k(x, row_0), ..., k(x, row_{m-1})) against the rows of `items`.
Vector kernel_vector(const KernelSpec& spec, const Matrix& items,
                     const Vector& x);

}  // namespace kpref
