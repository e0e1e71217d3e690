#pragma once

#include <optional>
#include <span>

#include "lrt/coreset.hpp"
#include "lrt/rng.hpp"
#include "lrt/types.hpp"

namespace lrt {

/// Queries Q (n x d), keys K (n x d), values V (n x d_v).
struct AttentionProblem {
  Matrix Q;
  Matrix K;
  Matrix V;

  /// Throws std::invalid_argument on shape mismatch, empty or non-finite input.
  void validate() const;
  std::size_t size() const { return static_cast<std::size_t>(K.rows()); }
  std::size_t key_dim() const { return static_cast<std::size_t>(K.cols()); }
};

struct AttentionApproxResult {
  Matrix T_hat;
  Coreset selected;
  std::optional<double> max_err;
};

/// Softmax attention D^-1 A V with A_ij = exp(<q_i, k_j> / sqrt(d)) over the
/// key-value rows in `subset`.
/// Per-row max subtraction keeps the exponent nonpositive.
Matrix exact_attention(const AttentionProblem& problem, std::span<const std::size_t> subset);
Matrix exact_attention(const AttentionProblem& problem);

/// Augmented points [k / d^(1/4) | v | v_max] for the attention kernel.
Matrix attention_augmented_points(const AttentionProblem& problem);

/// Thins key-value pairs with KH-Compress(0.5) under the attention kernel at
/// level g, then returns exact attention on the selected pairs.
AttentionApproxResult thinformer(const AttentionProblem& problem, unsigned g, RandomStream& stream,
                                 WorkCounters* counters = nullptr, bool compute_error = false);

/// Uniformly subsampled key-value pairs (without replacement), exact attention
/// on the subset.
AttentionApproxResult uniform_attention(const AttentionProblem& problem, std::size_t n_out,
                                        RandomStream& stream, bool compute_error = false);

/// Entrywise max |T_hat - T|. Throws std::invalid_argument on shape mismatch.
double attention_max_err(const Matrix& T_hat, const Matrix& T);

}  // namespace lrt
