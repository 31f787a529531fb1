#pragma once

#include <string>

#include "kpref/kernels.hpp"
#include "kpref/losses.hpp"
#include "kpref/solver_config.hpp"

namespace kpref {

/// Everything a training run needs, parsed from a flat key = value config
/// file ('#' starts a comment, blank lines ignored). Keys:
///
///   kernel      linear | rbf | polynomial      (default linear)
///   gamma       rbf width                      (required for rbf)
///   degree      polynomial degree              (required for polynomial)
///   coef0       polynomial offset              (default 0)
///   loss        hinge | logistic               (default logistic)
///   margin      hinge target margin            (default 1)
///   lambda      ideal-point regularizer        (default 0; preference only)
///   trace_weight scale regularizer             (default 0; triplet only)
///   max_iters, step_size, tol_grad, seed       solver knobs
///   init        identity_zero | random         (default identity_zero)
///   init_scale  random init scale              (default 1)
///   items_csv, pairs_csv, triplets_csv         data files
///   model_out   output model path              (default model.json)
///
/// Relative paths are resolved against the config file's directory.
/// Unknown keys are rejected.
struct RunConfig {
  KernelSpec kernel = KernelSpec::linear();
  LossSpec loss = LossSpec::logistic();
  double lambda = 0.0;
  double trace_weight = 0.0;
  SolverConfig solver;
  std::string items_csv;
  std::string pairs_csv;     ///< empty if absent
  std::string triplets_csv;  ///< empty if absent
  std::string model_out = "model.json";
};

/// Parses a config file. Throws ConfigError on syntax errors, unknown keys,
/// invalid values, or a missing items_csv; file-exists checks happen when
/// the files are opened.
RunConfig load_run_config(const std::string& path);

}  // namespace kpref
