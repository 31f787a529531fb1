#pragma once

#include <cstdint>
#include <functional>

#include "kpref/types.hpp"

namespace kpref {

/// Starting point for the projected gradient solvers.
enum class InitKind {
  IdentityZero,  ///< A = identity, ideal point u = 0
  Random         ///< seeded random positive definite A and Gaussian u
};

/// Knobs shared by both solvers. All sizes/steps must be positive.
struct SolverConfig {
  long max_iters = 2000;
  double step_size = 1e-2;
  double tol_grad = 1e-6;
  std::uint64_t seed = 0;
  InitKind init = InitKind::IdentityZero;
  double init_scale = 1.0;  ///< scale of the random initialization

  /// Throws ConfigError on non-positive max_iters/step_size/tol_grad or
  /// non-positive init_scale.
  void validate() const;
};

/// Called once with the initial state (iteration 0) and once after every
/// accepted descent step. For the triplet solver, which has no ideal point,
/// `u` is an empty vector.
using IterationObserver = std::function<void(
    long iteration, const Matrix& A, const Vector& u, double objective)>;

}  // namespace kpref
