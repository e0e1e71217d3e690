#pragma once

#include <span>

#include "lrt/types.hpp"

namespace lrt {

/// Ordered multiset of indices into a PointSet. Order is selection order;
/// repeats occur only after greedy refinement.
struct Coreset {
  IndexList indices;

  std::size_t size() const { return indices.size(); }
  bool operator==(const Coreset&) const = default;
};

/// Uniform input distribution and the (multiplicity-weighted) output
/// distribution induced by a coreset over n points.
struct InducedVectors {
  Vector p_in;
  Vector q_out;
  Vector difference() const { return p_in - q_out; }
};

/// Throws std::out_of_range for an index >= n, std::invalid_argument for an
/// empty coreset.
InducedVectors induced_prob_vectors(std::size_t n, const Coreset& coreset);

/// Uniform-with-multiplicity probability vector of a coreset over n points.
Vector coreset_weights(std::size_t n, std::span<const std::size_t> indices);

/// True when every index appears at most once.
bool has_distinct_indices(std::span<const std::size_t> indices);

/// [0, 1, ..., n-1]
IndexList iota_indices(std::size_t n);

}  // namespace lrt
