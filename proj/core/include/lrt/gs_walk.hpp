#pragma once

#include <functional>
#include <span>

#include "lrt/kernels.hpp"
#include "lrt/rng.hpp"
#include "lrt/types.hpp"

namespace lrt {

enum class GsImpl { quartic, cubic };

struct GsWalkOptions {
  /// |z_i| >= 1 - freeze_tol freezes coordinate i (snapped to exactly +-1).
  double freeze_tol = 1e-9;
  /// Q is replaced by Q + ridge I with ridge = ridge_rel * trace(Q) / m when
  /// its Cholesky factorization fails or has a pivot below
  /// pivot_tol * max_i Q_ii. Both implementations see the same matrix.
  double ridge_rel = 1e-10;
  double pivot_tol = 1e-10;
  /// Cubic variant: check ||C Q_{A2,A2} - I||_max <= 1e-6 every iteration.
  bool validate_inverse = false;
};

/// State visible to an observer after each direction computation.
struct GsIterationView {
  std::size_t iteration = 0;
  std::size_t pivot = 0;
  /// Coordinates of A2 = A' \ {pivot}, in the order used by `inverse`.
  std::span<const std::size_t> active;
  /// Maintained inverse of Q_{A2,A2} (cubic only, else nullptr).
  const Eigen::MatrixXd* inverse = nullptr;
  /// Effective (possibly ridged) Q.
  const Eigen::MatrixXd* Q = nullptr;
  const Vector* z = nullptr;
};
using GsObserver = std::function<void(const GsIterationView&)>;

struct GsWalkResult {
  Vector z;                      ///< final assignment in {-1, +1}^m
  std::vector<std::size_t> pivots;  ///< pivot at each iteration
  std::size_t iterations = 0;
  GsImpl impl_used = GsImpl::cubic;
  bool fell_back = false;        ///< cubic requested, quartic run
  double ridge = 0.0;
};

/// Kernelized Gram-Schmidt walk on the m x m paired-difference matrix Q.
/// Randomness is consumed identically by both implementations: one
/// uniform_index per pivot draw and one uniform01 per step.
GsWalkResult kernel_gs_walk(const Matrix& Q, RandomStream& stream, GsImpl impl,
                            const GsWalkOptions& options = {}, WorkCounters* counters = nullptr,
                            const GsObserver& observer = {});

/// Q_ij = k(a_i, a_j) + k(b_i, b_j) - k(a_i, b_j) - k(b_i, a_j) with
/// (a_i, b_i) = (input[2i], input[2i+1]). Requires an even-length input.
Matrix paired_difference_matrix(const KernelOracle& oracle, std::span<const std::size_t> input);

}  // namespace lrt
