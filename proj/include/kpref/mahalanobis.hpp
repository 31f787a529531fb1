#pragma once

#include "kpref/types.hpp"

namespace kpref {

/// Eigenvalue floor applied by psd_project: clamped spectra never fall below
/// this, keeping projected forms positive definite (not merely semidefinite).
inline constexpr double kEigFloor = 1e-9;

/// A symmetric positive (semi)definite bilinear form A on coordinate space,
/// defining the inner product <x, y>_A = y^T A x and squared distance
/// |x - y|_A^2. Construct via from_matrix (validates symmetry) or identity.
class MahalanobisForm {
 public:
  MahalanobisForm() = default;

  /// Wraps a symmetric matrix. The input must satisfy
  /// max|A - A^T| <= 1e-8 * (1 + max|A|); the stored matrix is exactly
  /// symmetrized by mirroring the upper triangle into the lower.
  static MahalanobisForm from_matrix(const Matrix& A);

  /// The standard inner product: A = I_m.
  static MahalanobisForm identity(Index m);

  Index dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }

  /// <x, y>_A = y^T A x.
  double inner(const Vector& x, const Vector& y) const;

  /// |x|_A^2 = <x, x>_A.
  double norm_sq(const Vector& x) const;

  /// |x - y|_A^2.
  double dist_sq(const Vector& x, const Vector& y) const;

 private:
  explicit MahalanobisForm(Matrix A) : matrix_(std::move(A)) {}
  Matrix matrix_;
};

/// Smallest eigenvalue of a symmetric matrix. Throws NumericalError if the
/// eigensolver fails to converge.
double min_eigenvalue(const Matrix& A);

/// Nearest (Frobenius) symmetric positive definite matrix: symmetrize,
/// eigendecompose, clamp eigenvalues to kEigFloor, reassemble. The result is
/// exactly symmetric. Throws NumericalError if the eigensolver fails.
Matrix psd_project(const Matrix& A);

/// Extends a form A on the column span of Q (D x m, orthonormal columns) to
/// the full ambient space: B = Q A Q^T + (I - Q Q^T). B acts as A on the
/// span and as the identity on its orthogonal complement. Throws InputError
/// unless Q^T Q = I_m to within 1e-10.
Matrix extend_ambient(const Matrix& A, const Matrix& Q);

/// Restricts an ambient form B to the column span of Q: A = Q^T B Q.
/// Inverse of extend_ambient on the span: restrict(extend(A, Q), Q) = A.
Matrix restrict_form(const Matrix& B, const Matrix& Q);

}  // namespace kpref
