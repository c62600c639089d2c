#pragma once

#include <Eigen/Dense>

namespace sszd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace sszd
