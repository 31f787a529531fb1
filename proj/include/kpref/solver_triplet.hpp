#pragma once

#include <span>
#include <vector>

#include "kpref/embedding.hpp"
#include "kpref/losses.hpp"
#include "kpref/mahalanobis.hpp"
#include "kpref/solver_config.hpp"
#include "kpref/solver_preference.hpp"
#include "kpref/types.hpp"

namespace kpref {

/// One relative comparison anchored at `anchor`: label y = sign of
/// dist(anchor, second) - dist(anchor, third). The anchor may coincide with
/// one of the compared items; only second == third is rejected (at
/// ingestion) as carrying no information.
struct TripletSample {
  Index anchor = 0;
  Index second = 0;
  Index third = 0;
  int y = +1;
};

/// Result of fit_triplet. The learned geometry is the form alone; there is
/// no ideal point in this problem.
struct TripletModel {
  GramBasis basis;
  MahalanobisForm form;       ///< learned bilinear form A on R^m
  Matrix kernel_coeffs;       ///< a = L^{-T} A L^{-1}
  double trace_weight = 0.0;  ///< scale regularizer weight used (often 0)
  std::vector<double> objective_trace;
  double zero_one_train_error = 0.0;
};

/// Distance gap of one triplet: |a1 - a2|_A^2 - |a1 - a3|_A^2. Positive
/// means a2 is farther from the anchor than a3.
double delta_triplet(const MahalanobisForm& form, const Vector& a1,
                     const Vector& a2, const Vector& a3);

/// Empirical objective sum_i loss(delta_i, y_i) + trace_weight * trace(A)
/// over rows of `coords`. The trace term (off by default) penalizes scale
/// drift; the plain problem has no regularizer. Deterministic fixed-order
/// accumulation, as preference_objective.
double triplet_objective(const Matrix& A, const Matrix& coords,
                         std::span<const TripletSample> data,
                         const LossSpec& loss, double trace_weight = 0.0);

/// Analytic gradient of triplet_objective:
///   grad_A = sum_i g_i [(a1-a2)(a1-a2)^T - (a1-a3)(a1-a3)^T]
///            + trace_weight * I
/// with g_i the loss derivative at sample i. Exactly symmetric.
Matrix triplet_gradient(const Matrix& A, const Matrix& coords,
                        std::span<const TripletSample> data,
                        const LossSpec& loss, double trace_weight = 0.0);

/// Fraction of triplets whose margin y * delta is <= 0.
double triplet_zero_one_error(const Matrix& A, const Matrix& coords,
                              std::span<const TripletSample> data);

/// Objective of a trained model on triplets over its own base items.
double objective(const TripletModel& model, std::span<const TripletSample> data,
                 const LossSpec& loss);

/// Learns the form A by projected gradient descent over the positive
/// semidefinite cone, starting from the identity unless the config selects
/// random initialization. Same stopping and backtracking behavior as
/// fit_preference. Errors as fit_preference.
TripletModel fit_triplet(const GramBasis& basis,
                         std::span<const TripletSample> data,
                         const LossSpec& loss, const SolverConfig& cfg,
                         double trace_weight = 0.0,
                         const IterationObserver& observer = {});

}  // namespace kpref
