#pragma once

#include <span>
#include <vector>

#include "lrt/rng.hpp"
#include "lrt/types.hpp"

namespace lrt {

/// Next-epoch permutation: steps i with selected[i] are appended to the front
/// list in order, the rest are prepended to the back list. Returns front + back.
/// Throws std::invalid_argument on size mismatch or a non-bijective prior.
IndexList thinned_reorder(std::span<const std::size_t> prior_perm, const std::vector<bool>& selected);

/// Selection mask from LKH(delta) halving of the gradient rows.
std::vector<bool> lkh_selection(const Matrix& grads, double delta, RandomStream& stream);

/// Signs +1 for selected rows, -1 otherwise.
Vector selection_signs(const std::vector<bool>& selected);

/// max_j || sum_{i <= j} signs_i x_i ||_2.
double prefix_discrepancy(const Matrix& grads, const Vector& signs);

enum class LossKind { least_squares, logistic };
enum class Ordering { random_reshuffle, lkh_reorder };

/// Per-example losses f_i(w) = (x_i^T w - y_i)^2 / 2 or
/// log(1 + exp(-y_i x_i^T w)) (labels +-1), each plus (l2/2) ||w||^2.
struct SgdProblem {
  LossKind loss = LossKind::least_squares;
  Matrix features;
  Vector targets;
  double step_size = 0.01;
  std::size_t epochs = 1;
  double l2 = 0.0;
  std::size_t batch_size = 1;

  void validate() const;
};

struct SgdTrajectory {
  std::vector<double> losses;       ///< training loss after each epoch (index 0: initial)
  std::vector<std::size_t> eps_ranks;  ///< eps-rank of each epoch's gradient matrix
  std::vector<double> eps_values;
  bool diverged = false;
};

/// Average training loss at w.
double sgd_loss(const SgdProblem& problem, const Vector& w);

/// Runs K epochs from w = 0. lkh_reorder applies thinned_reorder with
/// LKH(1/(2K)) to the gradients recorded during each epoch; random_reshuffle
/// draws a fresh uniform permutation per epoch. The first epoch uses a uniform
/// permutation in both modes.
SgdTrajectory run_sgd(const SgdProblem& problem, Ordering ordering, std::uint64_t seed);

}  // namespace lrt
