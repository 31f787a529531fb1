#pragma once

#include <Eigen/Dense>

#include <vector>

namespace kpref {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

}  // namespace kpref
