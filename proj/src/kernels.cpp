#include "kpref/kernels.hpp"

#include <cmath>

#include "kpref/errors.hpp"

namespace kpref {

namespace {

/// base^exp by repeated squaring for small non-negative integer exponents.
/// Deterministic across platforms, unlike std::pow on some libms.
double ipow(double base, int exp) {
  double result = 1.0;
  double acc = base;
  while (exp > 0) {
    if (exp & 1) result *= acc;
    acc *= acc;
    exp >>= 1;
  }
  return result;
}

double eval_unchecked(const KernelSpec& spec, const Vector& s,
                      const Vector& t) {
  switch (spec.kind) {
    case KernelKind::Linear:
      return s.dot(t);
    case KernelKind::Rbf:
      return std::exp(-spec.gamma * (s - t).squaredNorm());
    case KernelKind::Polynomial:
      return ipow(s.dot(t) + spec.coef0, spec.degree);
  }
  throw InputError("unknown kernel kind");
}

}  // namespace

KernelSpec KernelSpec::linear() {
  KernelSpec spec;
  spec.kind = KernelKind::Linear;
  return spec;
}

KernelSpec KernelSpec::rbf(double gamma) {
  if (!(gamma > 0.0))
    throw ConfigError("rbf kernel requires gamma > 0");
  KernelSpec spec;
  spec.kind = KernelKind::Rbf;
  spec.gamma = gamma;
  return spec;
}

KernelSpec KernelSpec::polynomial(int degree, double coef0) {
  if (degree < 1)
    throw ConfigError("polynomial kernel requires degree >= 1");
  if (!(coef0 >= 0.0))
    throw ConfigError("polynomial kernel requires coef0 >= 0");
  KernelSpec spec;
  spec.kind = KernelKind::Polynomial;
  spec.degree = degree;
  spec.coef0 = coef0;
  return spec;
}

std::string KernelSpec::name() const {
  switch (kind) {
    case KernelKind::Linear:
      return "linear";
    case KernelKind::Rbf:
      return "rbf";
    case KernelKind::Polynomial:
      return "polynomial";
  }
  return "unknown";
}

double kernel_eval(const KernelSpec& spec, const Vector& s, const Vector& t) {
  if (s.size() != t.size())
    throw InputError("kernel_eval: arguments have different dimensions");
  return eval_unchecked(spec, s, t);
}

Matrix gram(const KernelSpec& spec, const Matrix& items) {
  const Index m = items.rows();
  Matrix K(m, m);
#pragma omp parallel for schedule(dynamic) if (m >= 32)
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j <= i; ++j) {
      K(i, j) = eval_unchecked(spec, items.row(i).transpose(),
                               items.row(j).transpose());
    }
  }
  // mirror the strict lower triangle; K is exactly symmetric by construction
  for (Index i = 0; i < m; ++i)
    for (Index j = i + 1; j < m; ++j) K(i, j) = K(j, i);
  return K;
}

Vector kernel_vector(const KernelSpec& spec, const Matrix& items,
                     const Vector& x) {
  if (items.cols() != x.size())
    throw InputError("kernel_vector: query dimension does not match items");
  const Index m = items.rows();
  Vector v(m);
  for (Index i = 0; i < m; ++i)
    v(i) = eval_unchecked(spec, items.row(i).transpose(), x);
  return v;
}

}  // namespace kpref
