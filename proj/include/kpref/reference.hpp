#pragma once

#include <span>

#include "kpref/embedding.hpp"
#include "kpref/kernels.hpp"
#include "kpref/solver_preference.hpp"
#include "kpref/solver_triplet.hpp"
#include "kpref/types.hpp"

namespace kpref::reference {

/// Serial baselines for every parallelized code path. They exist to pin
/// down the production semantics: the Gram matrix and batch embedding are
/// bit-identical to their parallel counterparts (each entry or row is an
/// independent computation), while the objective and gradient evaluators
/// accumulate samples one by one, left to right — a different but equally
/// valid summation order that production must match to tight tolerance.

/// Every Gram entry computed directly, one scalar kernel evaluation per
/// (i, j), no symmetry shortcut and no threads.
Matrix gram(const KernelSpec& spec, const Matrix& items);

/// Row-by-row embedding loop.
Matrix embed_batch(const GramBasis& basis, const Matrix& points);

/// Single-loop, left-to-right sample accumulation of the preference
/// objective: sum_i loss(delta_i, y_i) + lambda |u|_A^2.
double preference_objective(const Matrix& A, const Vector& u, double lambda,
                            const Matrix& coords,
                            std::span<const PairedSample> data,
                            const LossSpec& loss);

/// Single-loop counterpart of the production preference gradients.
PreferenceGradients preference_gradients(const Matrix& A, const Vector& u,
                                         double lambda, const Matrix& coords,
                                         std::span<const PairedSample> data,
                                         const LossSpec& loss);

/// Single-loop triplet objective: sum_i loss(delta_i, y_i)
/// + trace_weight * tr(A).
double triplet_objective(const Matrix& A, const Matrix& coords,
                         std::span<const TripletSample> data,
                         const LossSpec& loss, double trace_weight = 0.0);

/// Single-loop counterpart of the production triplet gradient.
Matrix triplet_gradient(const Matrix& A, const Matrix& coords,
                        std::span<const TripletSample> data,
                        const LossSpec& loss, double trace_weight = 0.0);

}  // namespace kpref::reference
