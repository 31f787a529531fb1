#pragma once

#include <vector>

#include "kpref/kernels.hpp"
#include "kpref/types.hpp"

namespace kpref {

/// Relative pivot threshold below which a basis item is declared linearly
/// dependent on its predecessors: a Cholesky pivot is rejected when it is
/// <= dependence_tol(K) = 1e-10 * max(diag K).
double dependence_tol(const Matrix& gram_matrix);

/// Orthonormal coordinate system for the span of the kernel functions
/// k(., s_1), ..., k(., s_m) of m base items. Coordinates are produced by
/// Gram-Schmidt orthonormalization of those functions, realized numerically
/// through the Cholesky factorization K = L L^T of the Gram matrix: the
/// coordinate vector of item s_j is row j of L, and a general point embeds by
/// the triangular solve L alpha = (k(x, s_1), ..., k(x, s_m))^T.
class GramBasis {
 public:
  /// Number of base items m (the coordinate dimension).
  Index size() const { return static_cast<Index>(gram_.rows()); }

  /// Ambient dimension d of the base items.
  Index point_dim() const { return items_.cols(); }

  const KernelSpec& spec() const { return spec_; }

  /// Base items, one per row (m x d).
  const Matrix& items() const { return items_; }

  /// Gram matrix K, K(i, j) = k(s_i, s_j).
  const Matrix& gram() const { return gram_; }

  /// Lower-triangular Cholesky factor L with K = L L^T.
  const Matrix& chol() const { return chol_; }

  /// Diagonal of L: pivots_(i) = L(i, i) > 0.
  const Vector& pivots() const { return pivots_; }

  /// Coordinates of base item i: row i of L as a column vector.
  Vector item_coords(Index i) const;

  /// Coordinates of all base items (m x m): the factor L itself.
  Matrix all_item_coords() const { return chol_; }

  /// Coordinates of an arbitrary point x: solves L alpha = k_x where
  /// k_x(i) = k(x, s_i). Preserves all kernel inner products against the
  /// span of the base items.
  Vector embed(const Vector& x) const;

  /// Row-wise embed of a batch of points (n x d in, n x m out).
  /// Rows are independent, so this is parallelized over rows when OpenMP is
  /// enabled, bit-identically to the sequential loop.
  Matrix embed_batch(const Matrix& points) const;

  friend GramBasis build_basis(const KernelSpec& spec, const Matrix& items);

 private:
  KernelSpec spec_;
  Matrix items_;
  Matrix gram_;
  Matrix chol_;
  Vector pivots_;
};

/// Builds the coordinate system for the given base items (one per row).
/// Throws LinearDependenceError (with the 1-based position of the first
/// offending item) if some item's kernel function lies in the span of its
/// predecessors', i.e. the Gram matrix is not strictly positive definite.
GramBasis build_basis(const KernelSpec& spec, const Matrix& items);

/// Independent embedding oracle for small bases (m <= 8): computes each
/// coordinate from ratios of determinants of bordered Gram matrices,
///   alpha_i(x) = det(K with row i replaced by kernel values of x)
///               / sqrt(D_{i-1} D_i),
/// where D_i is the leading i x i principal minor of K (D_0 = 1). Slow but
/// entirely independent of the Cholesky path. Throws UnsupportedSizeError
/// for m > 8.
Vector embed_determinant_oracle(const GramBasis& basis, const Vector& x);

/// Coefficient matrix of a bilinear form given in basis coordinates,
/// re-expressed against the raw (non-orthonormalized) kernel functions:
/// a = L^{-T} A L^{-1}, so that alpha^T A beta = k_a^T a k_b for coordinate
/// vectors alpha, beta of points a, b with kernel-value vectors k_a, k_b.
Matrix kernel_coefficients(const GramBasis& basis, const Matrix& A);

/// Coefficient vector of a point of the span given in basis coordinates,
/// re-expressed in the raw kernel functions: b = L^{-T} u, so that
/// u = sum_i b_i k(., s_i) holds in coordinates: L^T b = u.
Vector kernel_coefficients(const GramBasis& basis, const Vector& u);

}  // namespace kpref
