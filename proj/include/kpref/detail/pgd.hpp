#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "kpref/errors.hpp"
#include "kpref/mahalanobis.hpp"
#include "kpref/solver_config.hpp"
#include "kpref/types.hpp"

namespace kpref::detail {

struct PgdResult {
  Matrix A;
  Vector u;
  std::vector<double> objective_trace;
};

/// Projected gradient descent with backtracking, shared by both solvers so
/// they have the same stopping and acceptance behavior by construction.
///
///   - One iteration takes a joint step (A, u) -> (psd_project(A - t gA),
///     u - t gu); when optimize_u is false, u never moves and gu is ignored.
///   - The step starts from cfg.step_size each iteration and is halved until
///     the objective strictly decreases, at most 30 times; if no halving
///     produces a decrease, the solver stops at the current iterate.
///   - Convergence: stop when the projected-gradient norm at the base step,
///     sqrt(|(A - psd_project(A - t gA))/t|_F^2 + |gu|^2), is <= tol_grad.
///   - The trace records the objective at the initial point and after every
///     accepted step; it is strictly decreasing by construction.
///   - A non-finite objective value raises NumericalError carrying the
///     iteration at which it appeared.
///
/// objective_at(A, u) -> double; gradients_at(A, u) -> {grad_A, grad_u}.
template <typename ObjFn, typename GradFn>
PgdResult run_pgd(Matrix A, Vector u, bool optimize_u, const SolverConfig& cfg,
                  ObjFn&& objective_at, GradFn&& gradients_at,
                  const IterationObserver& observer) {
  cfg.validate();

  double f = objective_at(A, u);
  if (!std::isfinite(f))
    throw NumericalError("objective is not finite at the initial point", 0);

  PgdResult result;
  result.objective_trace.push_back(f);
  if (observer) observer(0, A, u, f);

  for (long iter = 1; iter <= cfg.max_iters; ++iter) {
    auto [gA, gu] = gradients_at(A, u);
    if (!gA.allFinite() || (optimize_u && !gu.allFinite()))
      throw NumericalError("gradient is not finite", iter);

    double t = cfg.step_size;
    Matrix A_cand = psd_project(A - t * gA);
    Vector u_cand = optimize_u ? Vector(u - t * gu) : u;

    const double pg_a = ((A - A_cand) / t).squaredNorm();
    const double pg_u = optimize_u ? gu.squaredNorm() : 0.0;
    if (std::sqrt(pg_a + pg_u) <= cfg.tol_grad) break;

    bool accepted = false;
    double f_cand = f;
    for (int halving = 0; halving <= 30; ++halving) {
      if (halving > 0) {
        t *= 0.5;
        A_cand = psd_project(A - t * gA);
        if (optimize_u) u_cand = u - t * gu;
      }
      f_cand = objective_at(A_cand, u_cand);
      if (!std::isfinite(f_cand))
        throw NumericalError("objective is not finite", iter);
      if (f_cand < f) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // no descent within 30 halvings: stalled

    A = std::move(A_cand);
    if (optimize_u) u = std::move(u_cand);
    f = f_cand;
    result.objective_trace.push_back(f);
    if (observer) observer(iter, A, u, f);
  }

  result.A = std::move(A);
  result.u = std::move(u);
  return result;
}

}  // namespace kpref::detail
