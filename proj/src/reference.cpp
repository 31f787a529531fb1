#include "kpref/reference.hpp"

#include "kpref/errors.hpp"
#include "kpref/losses.hpp"

namespace kpref::reference {

namespace {

Vector row_minus(const Matrix& coords, Index i, const Vector& u) {
  return coords.row(i).transpose() - u;
}

}  // namespace

Matrix gram(const KernelSpec& spec, const Matrix& items) {
  const Index m = items.rows();
  Matrix K(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      K(i, j) = kernel_eval(spec, items.row(i).transpose(),
                            items.row(j).transpose());
  return K;
}

Matrix embed_batch(const GramBasis& basis, const Matrix& points) {
  Matrix out(points.rows(), basis.size());
  for (Index r = 0; r < points.rows(); ++r)
    out.row(r) = basis.embed(points.row(r).transpose()).transpose();
  return out;
}

double preference_objective(const Matrix& A, const Vector& u, double lambda,
                            const Matrix& coords,
                            std::span<const PairedSample> data,
                            const LossSpec& loss) {
  double total = 0.0;
  for (const auto& s : data) {
    const Vector d1 = row_minus(coords, s.first, u);
    const Vector d2 = row_minus(coords, s.second, u);
    const double delta = d1.dot(A * d1) - d2.dot(A * d2);
    total += loss_value(loss, delta, s.y);
  }
  return total + lambda * u.dot(A * u);
}

PreferenceGradients preference_gradients(const Matrix& A, const Vector& u,
                                         double lambda, const Matrix& coords,
                                         std::span<const PairedSample> data,
                                         const LossSpec& loss) {
  const Index m = A.rows();
  PreferenceGradients out;
  out.grad_A = Matrix::Zero(m, m);
  out.grad_u = Vector::Zero(m);
  for (const auto& s : data) {
    const Vector d1 = row_minus(coords, s.first, u);
    const Vector d2 = row_minus(coords, s.second, u);
    const double delta = d1.dot(A * d1) - d2.dot(A * d2);
    const double g = loss_grad_wrt_delta(loss, delta, s.y);
    if (g == 0.0) continue;
    out.grad_A.noalias() += g * (d1 * d1.transpose());
    out.grad_A.noalias() -= g * (d2 * d2.transpose());
    out.grad_u.noalias() += (-2.0 * g) * (A * d1);
    out.grad_u.noalias() += (2.0 * g) * (A * d2);
  }
  out.grad_A.noalias() += lambda * (u * u.transpose());
  out.grad_u.noalias() += (2.0 * lambda) * (A * u);
  out.grad_A = 0.5 * (out.grad_A + out.grad_A.transpose()).eval();
  return out;
}

double triplet_objective(const Matrix& A, const Matrix& coords,
                         std::span<const TripletSample> data,
                         const LossSpec& loss, double trace_weight) {
  double total = 0.0;
  for (const auto& s : data) {
    const Vector d12 =
        (coords.row(s.anchor) - coords.row(s.second)).transpose();
    const Vector d13 =
        (coords.row(s.anchor) - coords.row(s.third)).transpose();
    const double delta = d12.dot(A * d12) - d13.dot(A * d13);
    total += loss_value(loss, delta, s.y);
  }
  return total + trace_weight * A.trace();
}

Matrix triplet_gradient(const Matrix& A, const Matrix& coords,
                        std::span<const TripletSample> data,
                        const LossSpec& loss, double trace_weight) {
  const Index m = A.rows();
  Matrix grad = Matrix::Zero(m, m);
  for (const auto& s : data) {
    const Vector d12 =
        (coords.row(s.anchor) - coords.row(s.second)).transpose();
    const Vector d13 =
        (coords.row(s.anchor) - coords.row(s.third)).transpose();
    const double delta = d12.dot(A * d12) - d13.dot(A * d13);
    const double g = loss_grad_wrt_delta(loss, delta, s.y);
    if (g == 0.0) continue;
    grad.noalias() += g * (d12 * d12.transpose());
    grad.noalias() -= g * (d13 * d13.transpose());
  }
  grad.diagonal().array() += trace_weight;
  grad = 0.5 * (grad + grad.transpose()).eval();
  return grad;
}

}  // namespace kpref::reference
