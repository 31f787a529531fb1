#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "kpref/types.hpp"

namespace kpref {

/// Seeded random source with hand-rolled distributions. The standard library
/// distributions are implementation-defined, so uniform and normal draws are
/// derived here directly from the mt19937_64 bit stream: same seed, same
/// sequence, on any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<double>(hi - lo + 1);
    auto offset = static_cast<std::int64_t>(uniform() * span);
    if (offset > hi - lo) offset = hi - lo;
    return lo + offset;
  }

  int sign() { return uniform() < 0.5 ? -1 : +1; }

  /// Standard normal via Box-Muller.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  Vector normal_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  Matrix normal_matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = normal();
    return m;
  }

  /// Symmetric positive definite matrix with smallest eigenvalue >= ridge.
  Matrix pd_matrix(Index n, double ridge) {
    const Matrix g = normal_matrix(n, n);
    Matrix m = (g * g.transpose()) / static_cast<double>(n);
    m.diagonal().array() += ridge;
    // mirror the upper triangle so the result is symmetric bit-exactly
    for (Index i = 1; i < n; ++i)
      for (Index j = 0; j < i; ++j) m(i, j) = m(j, i);
    return m;
  }

  /// D x m matrix with orthonormal columns.
  Matrix orthonormal_basis(Index ambient_dim, Index subspace_dim) {
    const Matrix g = normal_matrix(ambient_dim, subspace_dim);
    Eigen::HouseholderQR<Matrix> qr(g);
    return qr.householderQ() * Matrix::Identity(ambient_dim, subspace_dim);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace kpref
