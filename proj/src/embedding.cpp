#include "kpref/embedding.hpp"

#include <cmath>

#include "kpref/errors.hpp"

namespace kpref {

double dependence_tol(const Matrix& gram_matrix) {
  const double max_diag =
      gram_matrix.rows() == 0 ? 0.0 : gram_matrix.diagonal().maxCoeff();
  return 1e-10 * max_diag;
}

Vector GramBasis::item_coords(Index i) const {
  if (i < 0 || i >= size())
    throw InputError("item_coords: index out of range");
  return chol_.row(i).transpose();
}

Vector GramBasis::embed(const Vector& x) const {
  const Vector kx = kernel_vector(spec_, items_, x);
  return chol_.triangularView<Eigen::Lower>().solve(kx);
}

Matrix GramBasis::embed_batch(const Matrix& points) const {
  if (points.cols() != point_dim())
    throw InputError("embed_batch: point dimension does not match basis");
  const Index n = points.rows();
  Matrix coords(n, size());
#pragma omp parallel for schedule(dynamic) if (n >= 32)
  for (Index i = 0; i < n; ++i)
    coords.row(i) = embed(points.row(i).transpose()).transpose();
  return coords;
}

GramBasis build_basis(const KernelSpec& spec, const Matrix& items) {
  const Index m = items.rows();
  if (m == 0) throw InputError("build_basis: need at least one item");

  GramBasis basis;
  basis.spec_ = spec;
  basis.items_ = items;
  basis.gram_ = gram(spec, items);

  // Hand-rolled left-looking Cholesky so each pivot can be inspected before
  // it is used; a pivot at or below the dependence tolerance means item j's
  // kernel function lies (numerically) in the span of items 1..j-1.
  const Matrix& K = basis.gram_;
  const double tol = dependence_tol(K);
  Matrix L = Matrix::Zero(m, m);
  Vector pivots(m);
  for (Index j = 0; j < m; ++j) {
    double diag = K(j, j) - L.row(j).head(j).squaredNorm();
    if (!(diag > tol * tol) || !std::isfinite(diag)) {
      // pivot^2 = diag, so compare against tol^2; report 1-based position
      throw LinearDependenceError(
          "base item is linearly dependent on its predecessors",
          static_cast<std::ptrdiff_t>(j) + 1);
    }
    const double piv = std::sqrt(diag);
    L(j, j) = piv;
    pivots(j) = piv;
    for (Index i = j + 1; i < m; ++i)
      L(i, j) = (K(i, j) - L.row(i).head(j).dot(L.row(j).head(j))) / piv;
  }
  basis.chol_ = L;
  basis.pivots_ = pivots;
  return basis;
}

namespace {

/// Leading principal minors D_0 = 1, D_1, ..., D_m of K.
std::vector<double> principal_minors(const Matrix& K) {
  const Index m = K.rows();
  std::vector<double> minors(static_cast<std::size_t>(m) + 1);
  minors[0] = 1.0;
  for (Index i = 1; i <= m; ++i)
    minors[static_cast<std::size_t>(i)] = K.topLeftCorner(i, i).determinant();
  return minors;
}

}  // namespace

Vector embed_determinant_oracle(const GramBasis& basis, const Vector& x) {
  const Index m = basis.size();
  if (m > 8)
    throw UnsupportedSizeError(
        "embed_determinant_oracle supports at most 8 base items");
  const Vector kx = kernel_vector(basis.spec(), basis.items(), x);
  const auto minors = principal_minors(basis.gram());

  Vector alpha(m);
  for (Index i = 0; i < m; ++i) {
    // Bordered matrix: the leading (i+1) x (i+1) block of K with its last
    // row replaced by the kernel values of x against items 1..i+1.
    Matrix bordered = basis.gram().topLeftCorner(i + 1, i + 1);
    bordered.row(i) = kx.head(i + 1).transpose();
    const double num = bordered.determinant();
    const double den = std::sqrt(minors[static_cast<std::size_t>(i)] *
                                 minors[static_cast<std::size_t>(i) + 1]);
    alpha(i) = num / den;
  }
  return alpha;
}

Matrix kernel_coefficients(const GramBasis& basis, const Matrix& A) {
  const Index m = basis.size();
  if (A.rows() != m || A.cols() != m)
    throw InputError("kernel_coefficients: matrix size does not match basis");
  const auto& L = basis.chol();
  // a = L^{-T} A L^{-1}: solve L^T X = A, then (L^T Y = X^T) => a = Y^T... do
  // it directly with two triangular solves.
  const Matrix X = L.transpose().triangularView<Eigen::Upper>().solve(A);
  const Matrix a =
      L.transpose()
          .triangularView<Eigen::Upper>()
          .solve(X.transpose())
          .transpose();
  return a;
}

Vector kernel_coefficients(const GramBasis& basis, const Vector& u) {
  if (u.size() != basis.size())
    throw InputError("kernel_coefficients: vector size does not match basis");
  return basis.chol()
      .transpose()
      .triangularView<Eigen::Upper>()
      .solve(u);
}

}  // namespace kpref
