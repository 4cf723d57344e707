#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace isokernel {

// Points are rows; row-major storage keeps a point contiguous in memory.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;

// Read-only view of a single point; binds rows of Matrix without copying.
using PointRef = Eigen::Ref<const RowVector>;

// One entry of a ranking. Sorting by similarity ascending puts the most
// anomalous items first; ties keep the original index order.
struct ScoredItem {
  Index id = 0;
  double similarity = 0.0;
};

}  // namespace isokernel
