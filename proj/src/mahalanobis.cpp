#include "kpref/mahalanobis.hpp"

#include <Eigen/Eigenvalues>

#include "kpref/errors.hpp"

namespace kpref {

namespace {

/// Copy the upper triangle onto the lower so the result is bit-symmetric.
void mirror_upper(Matrix& A) {
  for (Index i = 1; i < A.rows(); ++i)
    for (Index j = 0; j < i; ++j) A(i, j) = A(j, i);
}

}  // namespace

MahalanobisForm MahalanobisForm::from_matrix(const Matrix& A) {
  if (A.rows() != A.cols())
    throw InputError("MahalanobisForm: matrix must be square");
  const double scale = A.cwiseAbs().maxCoeff();
  const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * (1.0 + scale))
    throw InputError("MahalanobisForm: matrix is not symmetric");
  Matrix sym = A;
  mirror_upper(sym);
  return MahalanobisForm(std::move(sym));
}

MahalanobisForm MahalanobisForm::identity(Index m) {
  return MahalanobisForm(Matrix::Identity(m, m));
}

double MahalanobisForm::inner(const Vector& x, const Vector& y) const {
  if (x.size() != dim() || y.size() != dim())
    throw InputError("MahalanobisForm::inner: dimension mismatch");
  return y.dot(matrix_ * x);
}

double MahalanobisForm::norm_sq(const Vector& x) const {
  return inner(x, x);
}

double MahalanobisForm::dist_sq(const Vector& x, const Vector& y) const {
  const Vector diff = x - y;
  return norm_sq(diff);
}

double min_eigenvalue(const Matrix& A) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(A, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
    throw NumericalError("min_eigenvalue: eigensolver failed to converge");
  return eig.eigenvalues().minCoeff();
}

Matrix psd_project(const Matrix& A) {
  if (A.rows() != A.cols())
    throw InputError("psd_project: matrix must be square");
  const Matrix sym = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success)
    throw NumericalError("psd_project: eigensolver failed to converge");
  const Vector clamped = eig.eigenvalues().cwiseMax(kEigFloor);
  Matrix out = eig.eigenvectors() * clamped.asDiagonal() *
               eig.eigenvectors().transpose();
  mirror_upper(out);
  return out;
}

Matrix extend_ambient(const Matrix& A, const Matrix& Q) {
  const Index D = Q.rows();
  const Index m = Q.cols();
  if (A.rows() != m || A.cols() != m)
    throw InputError("extend_ambient: form size does not match basis width");
  const Matrix gram_q = Q.transpose() * Q;
  if ((gram_q - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-10)
    throw InputError("extend_ambient: basis columns are not orthonormal");
  Matrix B = Q * A * Q.transpose() +
             (Matrix::Identity(D, D) - Q * Q.transpose());
  mirror_upper(B);
  return B;
}

Matrix restrict_form(const Matrix& B, const Matrix& Q) {
  if (B.rows() != Q.rows() || B.cols() != Q.rows())
    throw InputError("restrict_form: form size does not match ambient dim");
  Matrix A = Q.transpose() * B * Q;
  mirror_upper(A);
  return A;
}

}  // namespace kpref
