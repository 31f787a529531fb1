#include "kpref/solver_config.hpp"

#include "kpref/errors.hpp"

namespace kpref {

void SolverConfig::validate() const {
  if (max_iters <= 0)
    throw ConfigError("SolverConfig: max_iters must be positive");
  if (!(step_size > 0.0))
    throw ConfigError("SolverConfig: step_size must be positive");
  if (!(tol_grad > 0.0))
    throw ConfigError("SolverConfig: tol_grad must be positive");
  if (!(init_scale > 0.0))
    throw ConfigError("SolverConfig: init_scale must be positive");
}

}  // namespace kpref
