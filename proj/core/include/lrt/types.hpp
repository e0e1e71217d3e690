#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace lrt {

/// Row-major dense matrix; rows are points, gradients, or queries.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using IndexList = std::vector<std::size_t>;

/// Tallies of algorithmic work. Kernel evaluations are counted at the
/// kernel-oracle boundary, so cached or lazily computed entries count alike.
struct WorkCounters {
  std::uint64_t kernel_evals = 0;
  std::uint64_t flops = 0;

  void reset() { *this = {}; }
};

}  // namespace lrt
