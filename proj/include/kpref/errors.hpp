#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kpref {

/// Violated input contract: dimension mismatch, bad label, index out of range,
/// invalid parameter.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The kernel features of the items are linearly dependent, so no orthonormal
/// basis of their span indexed by the items exists. `item_index` is the
/// 1-based position of the first item whose feature lies in the span of the
/// previous ones.
class LinearDependenceError : public std::runtime_error {
 public:
  LinearDependenceError(const std::string& what, std::ptrdiff_t item_index)
      : std::runtime_error(what), item_index(item_index) {}
  std::ptrdiff_t item_index;
};

/// A numerical routine failed or produced a non-finite value. `iteration` is
/// the solver iteration at which it happened, or -1 outside a solver.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, long iteration = -1)
      : std::runtime_error(what), iteration(iteration) {}
  long iteration;
};

/// The requested operation is not defined for the given configuration
/// (e.g. gradient of the 0-1 loss).
class UnsupportedOperationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The input is larger than the routine supports.
class UnsupportedSizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration or data file: missing file, malformed CSV, unknown key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kpref
