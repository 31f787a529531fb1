#include "kpref/losses.hpp"

#include <cmath>

#include "kpref/errors.hpp"

namespace kpref {

LossSpec LossSpec::zero_one() {
  LossSpec spec;
  spec.kind = LossKind::ZeroOne;
  return spec;
}

LossSpec LossSpec::hinge(double margin_param) {
  if (!(margin_param >= 0.0))
    throw ConfigError("hinge loss requires margin >= 0");
  LossSpec spec;
  spec.kind = LossKind::Hinge;
  spec.margin_param = margin_param;
  return spec;
}

LossSpec LossSpec::logistic() {
  LossSpec spec;
  spec.kind = LossKind::Logistic;
  return spec;
}

std::string LossSpec::name() const {
  switch (kind) {
    case LossKind::ZeroOne:
      return "zero_one";
    case LossKind::Hinge:
      return "hinge";
    case LossKind::Logistic:
      return "logistic";
  }
  return "unknown";
}

double margin(double delta, int y) {
  if (y != -1 && y != 1)
    throw InputError("label must be -1 or +1");
  return static_cast<double>(y) * delta;
}

double loss_value(const LossSpec& spec, double delta, int y) {
  const double m = margin(delta, y);
  switch (spec.kind) {
    case LossKind::ZeroOne:
      return m <= 0.0 ? 1.0 : 0.0;
    case LossKind::Hinge:
      return std::max(0.0, spec.margin_param - m);
    case LossKind::Logistic:
      // log(1 + exp(-m)) computed without overflow for very negative m:
      // log(1 + exp(-m)) = max(-m, 0) + log1p(exp(-|m|))
      return std::max(-m, 0.0) + std::log1p(std::exp(-std::abs(m)));
  }
  throw InputError("unknown loss kind");
}

double loss_grad_wrt_delta(const LossSpec& spec, double delta, int y) {
  const double m = margin(delta, y);
  const double yd = static_cast<double>(y);
  switch (spec.kind) {
    case LossKind::ZeroOne:
      throw UnsupportedOperationError(
          "zero-one loss has no usable derivative");
    case LossKind::Hinge:
      return m < spec.margin_param ? -yd : 0.0;
    case LossKind::Logistic:
      // d/d delta log(1 + exp(-y delta)) = -y / (1 + exp(y delta)),
      // evaluated via exp of a non-positive argument for stability
      if (m >= 0.0)
        return -yd * std::exp(-m) / (1.0 + std::exp(-m));
      return -yd / (1.0 + std::exp(m));
  }
  throw InputError("unknown loss kind");
}

}  // namespace kpref
