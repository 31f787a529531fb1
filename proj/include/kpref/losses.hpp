#pragma once

#include <string>

#include "kpref/types.hpp"

namespace kpref {

enum class LossKind { ZeroOne, Hinge, Logistic };

/// A loss applied to the signed margin y * delta of one comparison, where
/// delta is the model's distance gap and y in {-1, +1} the observed label.
///   - zero_one:  1 if margin <= 0, else 0 (counting loss; no gradient)
///   - hinge:     max(0, margin_param - margin)
///   - logistic:  log(1 + exp(-margin))
struct LossSpec {
  LossKind kind = LossKind::Logistic;
  double margin_param = 1.0;  // hinge target margin; unused otherwise

  static LossSpec zero_one();
  static LossSpec hinge(double margin_param = 1.0);
  static LossSpec logistic();

  /// Name used in config files and serialized models.
  std::string name() const;
};

/// Signed margin y * delta. Throws InputError unless y is -1 or +1.
double margin(double delta, int y);

/// Loss of one comparison with gap `delta` and label `y`.
double loss_value(const LossSpec& spec, double delta, int y);

/// d loss / d delta at (delta, y). Hinge uses the one-sided derivative 0 at
/// its kink. Throws UnsupportedOperationError for the zero-one loss, which
/// is counted, never differentiated.
double loss_grad_wrt_delta(const LossSpec& spec, double delta, int y);

}  // namespace kpref
