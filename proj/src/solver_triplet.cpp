#include "kpref/solver_triplet.hpp"

#include <array>
#include <cmath>
#include <cstddef>

#include "kpref/detail/pgd.hpp"
#include "kpref/errors.hpp"
#include "kpref/parallel.hpp"
#include "kpref/rng.hpp"

namespace kpref {

namespace {

void check_indices(const Matrix& coords, std::span<const TripletSample> data) {
  const Index n_items = coords.rows();
  for (const auto& s : data) {
    if (s.anchor < 0 || s.anchor >= n_items || s.second < 0 ||
        s.second >= n_items || s.third < 0 || s.third >= n_items)
      throw InputError("sample index out of range");
    if (s.y != -1 && s.y != 1) throw InputError("label must be -1 or +1");
  }
}

template <typename T>
T combine_tree(const std::vector<T>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return combine_tree(parts, lo, mid) + combine_tree(parts, mid, hi);
}

double triplet_delta_raw(const Matrix& A, const Matrix& coords,
                         const TripletSample& s) {
  const Vector d2 = coords.row(s.anchor).transpose() -
                    coords.row(s.second).transpose();
  const Vector d3 = coords.row(s.anchor).transpose() -
                    coords.row(s.third).transpose();
  return d2.dot(A * d2) - d3.dot(A * d3);
}

}  // namespace

double delta_triplet(const MahalanobisForm& form, const Vector& a1,
                     const Vector& a2, const Vector& a3) {
  if (a2.size() != a1.size() || a3.size() != a1.size())
    throw InputError("delta_triplet: dimension mismatch");
  return form.norm_sq(a1 - a2) - form.norm_sq(a1 - a3);
}

double triplet_objective(const Matrix& A, const Matrix& coords,
                         std::span<const TripletSample> data,
                         const LossSpec& loss, double trace_weight) {
  check_indices(coords, data);
  const std::size_t n = data.size();
  std::array<double, kReductionChunks> partial{};
#pragma omp parallel for schedule(static) if (n >= 256)
  for (std::size_t c = 0; c < kReductionChunks; ++c) {
    const auto [lo, hi] = chunk_range(n, c, kReductionChunks);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
      s += loss_value(loss, triplet_delta_raw(A, coords, data[i]), data[i].y);
    partial[c] = s;
  }
  return pairwise_sum(partial) + trace_weight * A.trace();
}

Matrix triplet_gradient(const Matrix& A, const Matrix& coords,
                        std::span<const TripletSample> data,
                        const LossSpec& loss, double trace_weight) {
  check_indices(coords, data);
  const Index m = A.rows();
  const std::size_t n = data.size();

  std::vector<Matrix> partial_A(kReductionChunks, Matrix::Zero(m, m));
#pragma omp parallel for schedule(static) if (n >= 256)
  for (std::size_t c = 0; c < kReductionChunks; ++c) {
    const auto [lo, hi] = chunk_range(n, c, kReductionChunks);
    Matrix& gA = partial_A[c];
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& s = data[i];
      const Vector d2 = coords.row(s.anchor).transpose() -
                        coords.row(s.second).transpose();
      const Vector d3 = coords.row(s.anchor).transpose() -
                        coords.row(s.third).transpose();
      const double delta = d2.dot(A * d2) - d3.dot(A * d3);
      const double g = loss_grad_wrt_delta(loss, delta, s.y);
      if (g == 0.0) continue;
      gA.noalias() += g * (d2 * d2.transpose());
      gA.noalias() -= g * (d3 * d3.transpose());
    }
  }

  Matrix grad = combine_tree(partial_A, 0, kReductionChunks);
  grad.diagonal().array() += trace_weight;
  grad = 0.5 * (grad + grad.transpose()).eval();
  return grad;
}

double triplet_zero_one_error(const Matrix& A, const Matrix& coords,
                              std::span<const TripletSample> data) {
  check_indices(coords, data);
  if (data.empty()) return 0.0;
  long errors = 0;
  for (const auto& s : data) {
    const double delta = triplet_delta_raw(A, coords, s);
    if (static_cast<double>(s.y) * delta <= 0.0) ++errors;
  }
  return static_cast<double>(errors) / static_cast<double>(data.size());
}

double objective(const TripletModel& model,
                 std::span<const TripletSample> data, const LossSpec& loss) {
  return triplet_objective(model.form.matrix(), model.basis.all_item_coords(),
                           data, loss, model.trace_weight);
}

TripletModel fit_triplet(const GramBasis& basis,
                         std::span<const TripletSample> data,
                         const LossSpec& loss, const SolverConfig& cfg,
                         double trace_weight,
                         const IterationObserver& observer) {
  if (data.empty())
    throw InputError("fit_triplet: need at least one comparison");
  if (loss.kind == LossKind::ZeroOne)
    throw UnsupportedOperationError(
        "fit_triplet: zero-one loss is not differentiable; "
        "use hinge or logistic");
  if (!(trace_weight >= 0.0))
    throw ConfigError("fit_triplet: trace_weight must be >= 0");

  const Index m = basis.size();
  const Matrix coords = basis.all_item_coords();
  check_indices(coords, data);

  Matrix A0 = Matrix::Identity(m, m);
  if (cfg.init == InitKind::Random) {
    Rng rng(cfg.seed);
    A0 = rng.pd_matrix(m, 0.1) * cfg.init_scale;
  }

  auto obj = [&](const Matrix& A, const Vector&) {
    return triplet_objective(A, coords, data, loss, trace_weight);
  };
  auto grad = [&](const Matrix& A, const Vector&) {
    return std::pair<Matrix, Vector>{
        triplet_gradient(A, coords, data, loss, trace_weight), Vector{}};
  };

  auto result = detail::run_pgd(std::move(A0), Vector{}, /*optimize_u=*/false,
                                cfg, obj, grad, observer);

  TripletModel model;
  model.basis = basis;
  model.form = MahalanobisForm::from_matrix(result.A);
  model.kernel_coeffs = kernel_coefficients(basis, model.form.matrix());
  model.trace_weight = trace_weight;
  model.objective_trace = std::move(result.objective_trace);
  model.zero_one_train_error =
      triplet_zero_one_error(model.form.matrix(), coords, data);
  return model;
}

}  // namespace kpref
