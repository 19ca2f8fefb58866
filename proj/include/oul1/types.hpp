#pragma once

#include <Eigen/Dense>

namespace oul1 {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

}  // namespace oul1
