#include "kpref/solver_preference.hpp"

#include <array>
#include <cmath>
#include <cstddef>

#include "kpref/detail/pgd.hpp"
#include "kpref/errors.hpp"
#include "kpref/parallel.hpp"
#include "kpref/rng.hpp"

namespace kpref {

namespace {

void check_indices(const Matrix& coords, std::span<const PairedSample> data) {
  const Index n_items = coords.rows();
  for (const auto& s : data) {
    if (s.first < 0 || s.first >= n_items || s.second < 0 ||
        s.second >= n_items)
      throw InputError("sample index out of range");
    if (s.y != -1 && s.y != 1) throw InputError("label must be -1 or +1");
  }
}

/// Combines per-chunk partials in a fixed binary-tree order; the result
/// depends only on the partials, never on thread scheduling.
template <typename T>
T combine_tree(const std::vector<T>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return combine_tree(parts, lo, mid) + combine_tree(parts, mid, hi);
}

double pair_delta_raw(const Matrix& A, const Vector& u, const Matrix& coords,
                      const PairedSample& s) {
  const Vector d1 = coords.row(s.first).transpose() - u;
  const Vector d2 = coords.row(s.second).transpose() - u;
  return d1.dot(A * d1) - d2.dot(A * d2);
}

}  // namespace

double delta_pair(const MahalanobisForm& form, const Vector& u,
                  const Vector& a1, const Vector& a2) {
  if (a1.size() != u.size() || a2.size() != u.size())
    throw InputError("delta_pair: dimension mismatch");
  return form.norm_sq(a1 - u) - form.norm_sq(a2 - u);
}

double preference_objective(const Matrix& A, const Vector& u, double lambda,
                            const Matrix& coords,
                            std::span<const PairedSample> data,
                            const LossSpec& loss) {
  check_indices(coords, data);
  const std::size_t n = data.size();
  std::array<double, kReductionChunks> partial{};
#pragma omp parallel for schedule(static) if (n >= 256)
  for (std::size_t c = 0; c < kReductionChunks; ++c) {
    const auto [lo, hi] = chunk_range(n, c, kReductionChunks);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
      s += loss_value(loss, pair_delta_raw(A, u, coords, data[i]), data[i].y);
    partial[c] = s;
  }
  const double data_term = pairwise_sum(partial);
  return data_term + lambda * u.dot(A * u);
}

PreferenceGradients preference_gradients(const Matrix& A, const Vector& u,
                                         double lambda, const Matrix& coords,
                                         std::span<const PairedSample> data,
                                         const LossSpec& loss) {
  check_indices(coords, data);
  const Index m = A.rows();
  const std::size_t n = data.size();

  std::vector<Matrix> partial_A(kReductionChunks, Matrix::Zero(m, m));
  std::vector<Vector> partial_u(kReductionChunks, Vector::Zero(m));
#pragma omp parallel for schedule(static) if (n >= 256)
  for (std::size_t c = 0; c < kReductionChunks; ++c) {
    const auto [lo, hi] = chunk_range(n, c, kReductionChunks);
    Matrix& gA = partial_A[c];
    Vector& gu = partial_u[c];
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& s = data[i];
      const Vector d1 = coords.row(s.first).transpose() - u;
      const Vector d2 = coords.row(s.second).transpose() - u;
      const double delta = d1.dot(A * d1) - d2.dot(A * d2);
      const double g = loss_grad_wrt_delta(loss, delta, s.y);
      if (g == 0.0) continue;
      gA.noalias() += g * (d1 * d1.transpose());
      gA.noalias() -= g * (d2 * d2.transpose());
      gu.noalias() += (-2.0 * g) * (A * d1);
      gu.noalias() += (2.0 * g) * (A * d2);
    }
  }

  PreferenceGradients out;
  out.grad_A = combine_tree(partial_A, 0, kReductionChunks);
  out.grad_u = combine_tree(partial_u, 0, kReductionChunks);
  out.grad_A.noalias() += lambda * (u * u.transpose());
  out.grad_u.noalias() += (2.0 * lambda) * (A * u);
  // symmetrize; addition is commutative, so the result is bit-symmetric
  out.grad_A = 0.5 * (out.grad_A + out.grad_A.transpose()).eval();
  return out;
}

double preference_zero_one_error(const Matrix& A, const Vector& u,
                                 const Matrix& coords,
                                 std::span<const PairedSample> data) {
  check_indices(coords, data);
  if (data.empty()) return 0.0;
  long errors = 0;
  for (const auto& s : data) {
    const double delta = pair_delta_raw(A, u, coords, s);
    if (static_cast<double>(s.y) * delta <= 0.0) ++errors;
  }
  return static_cast<double>(errors) / static_cast<double>(data.size());
}

double objective(const PreferenceModel& model,
                 std::span<const PairedSample> data, const LossSpec& loss) {
  return preference_objective(model.form.matrix(), model.ideal, model.lambda,
                              model.basis.all_item_coords(), data, loss);
}

PreferenceGradients gradients(const PreferenceModel& model,
                              std::span<const PairedSample> data,
                              const LossSpec& loss) {
  return preference_gradients(model.form.matrix(), model.ideal, model.lambda,
                              model.basis.all_item_coords(), data, loss);
}

PreferenceModel fit_preference(const GramBasis& basis,
                               std::span<const PairedSample> data,
                               const LossSpec& loss, double lambda,
                               const SolverConfig& cfg,
                               const IterationObserver& observer) {
  if (data.empty())
    throw InputError("fit_preference: need at least one comparison");
  if (loss.kind == LossKind::ZeroOne)
    throw UnsupportedOperationError(
        "fit_preference: zero-one loss is not differentiable; "
        "use hinge or logistic");
  if (!(lambda >= 0.0))
    throw ConfigError("fit_preference: lambda must be >= 0");

  const Index m = basis.size();
  const Matrix coords = basis.all_item_coords();
  check_indices(coords, data);

  Matrix A0 = Matrix::Identity(m, m);
  Vector u0 = Vector::Zero(m);
  if (cfg.init == InitKind::Random) {
    Rng rng(cfg.seed);
    A0 = rng.pd_matrix(m, 0.1) * cfg.init_scale;
    u0 = rng.normal_vector(m) * cfg.init_scale;
  }

  auto obj = [&](const Matrix& A, const Vector& u) {
    return preference_objective(A, u, lambda, coords, data, loss);
  };
  auto grad = [&](const Matrix& A, const Vector& u) {
    auto g = preference_gradients(A, u, lambda, coords, data, loss);
    return std::pair<Matrix, Vector>{std::move(g.grad_A), std::move(g.grad_u)};
  };

  auto result = detail::run_pgd(std::move(A0), std::move(u0),
                                /*optimize_u=*/true, cfg, obj, grad, observer);

  PreferenceModel model;
  model.basis = basis;
  model.form = MahalanobisForm::from_matrix(result.A);
  model.ideal = std::move(result.u);
  model.lambda = lambda;
  model.expansion.a = kernel_coefficients(basis, model.form.matrix());
  model.expansion.b = kernel_coefficients(basis, model.ideal);
  model.objective_trace = std::move(result.objective_trace);
  model.zero_one_train_error =
      preference_zero_one_error(model.form.matrix(), model.ideal, coords, data);
  return model;
}

}  // namespace kpref
