#pragma once

#include <span>
#include <vector>

#include "kpref/embedding.hpp"
#include "kpref/losses.hpp"
#include "kpref/mahalanobis.hpp"
#include "kpref/solver_config.hpp"
#include "kpref/types.hpp"

namespace kpref {

/// One observed comparison: item `first` was judged farther from (label +1)
/// or closer to (label -1) the latent ideal point than item `second` —
/// concretely, y = sign(dist(first, ideal) - dist(second, ideal)).
struct PairedSample {
  Index first = 0;
  Index second = 0;
  int y = +1;
};

/// Coefficients re-expressing a trained model against the raw kernel
/// functions of the base items: u = sum_i b(i) k(., s_i) and A acts as
/// sum_ij a(i, j) k(., s_i) (x) k(., s_j).
struct KernelExpansion {
  Matrix a;
  Vector b;
};

/// Result of fit_preference.
struct PreferenceModel {
  GramBasis basis;
  MahalanobisForm form;      ///< learned bilinear form A on R^m
  Vector ideal;              ///< learned ideal point u in R^m
  double lambda = 0.0;       ///< regularization weight used
  KernelExpansion expansion; ///< a = L^{-T} A L^{-1}, b = L^{-T} u
  std::vector<double> objective_trace;
  double zero_one_train_error = 0.0;
};

/// Distance gap of one comparison against the ideal point u:
/// |a1 - u|_A^2 - |a2 - u|_A^2. Positive means a1 is farther.
double delta_pair(const MahalanobisForm& form, const Vector& u,
                  const Vector& a1, const Vector& a2);

/// Regularized empirical objective
///   sum_i loss(delta_i, y_i) + lambda * |u|_A^2
/// over rows of `coords` indexed by the samples. Samples are accumulated
/// chunk-wise in a fixed pairwise order, so the value is independent of the
/// number of OpenMP threads. Throws InputError on out-of-range indices.
double preference_objective(const Matrix& A, const Vector& u, double lambda,
                            const Matrix& coords,
                            std::span<const PairedSample> data,
                            const LossSpec& loss);

struct PreferenceGradients {
  Matrix grad_A;
  Vector grad_u;
};

/// Analytic gradients of preference_objective at (A, u):
///   grad_A = sum_i g_i [(a1-u)(a1-u)^T - (a2-u)(a2-u)^T] + lambda u u^T
///   grad_u = sum_i g_i [-2A(a1-u) + 2A(a2-u)] + 2 lambda A u
/// with g_i the loss derivative at sample i. grad_A is exactly symmetric.
/// Same deterministic accumulation contract as preference_objective.
PreferenceGradients preference_gradients(const Matrix& A, const Vector& u,
                                         double lambda, const Matrix& coords,
                                         std::span<const PairedSample> data,
                                         const LossSpec& loss);

/// Fraction of samples whose margin y * delta is <= 0 (ties count as errors).
double preference_zero_one_error(const Matrix& A, const Vector& u,
                                 const Matrix& coords,
                                 std::span<const PairedSample> data);

/// Objective of a trained model on comparisons over its own base items.
double objective(const PreferenceModel& model,
                 std::span<const PairedSample> data, const LossSpec& loss);

/// Gradients of a trained model's objective; see preference_gradients.
PreferenceGradients gradients(const PreferenceModel& model,
                              std::span<const PairedSample> data,
                              const LossSpec& loss);

/// Learns (A, u) by projected gradient descent over the positive
/// semidefinite cone (A projected after every step, u unconstrained),
/// starting from A = identity, u = 0 unless the config selects random
/// initialization. Comparisons index into the basis items. Throws
/// InputError on empty data or bad indices, UnsupportedOperationError for
/// the zero-one loss, NumericalError (with iteration) on non-finite values.
PreferenceModel fit_preference(const GramBasis& basis,
                               std::span<const PairedSample> data,
                               const LossSpec& loss, double lambda,
                               const SolverConfig& cfg,
                               const IterationObserver& observer = {});

}  // namespace kpref
