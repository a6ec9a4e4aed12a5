#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace supnys {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Point sets are stored one sample per row.
using Points = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using IndexSet = std::vector<Index>;

}  // namespace supnys
