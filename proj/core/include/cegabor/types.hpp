#pragma once

#include <Eigen/Dense>
#include <vector>

namespace cegabor {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using IndexVector = std::vector<int>;

}  // namespace cegabor
