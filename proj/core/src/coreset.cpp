#include "lrt/coreset.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace lrt {

Vector coreset_weights(std::size_t n, std::span<const std::size_t> indices) {
  if (indices.empty()) throw std::invalid_argument("coreset_weights: empty coreset");
  Vector q = Vector::Zero(static_cast<Eigen::Index>(n));
  const double w = 1.0 / static_cast<double>(indices.size());
  for (std::size_t i : indices) {
    if (i >= n) throw std::out_of_range("coreset index out of range");
    q(static_cast<Eigen::Index>(i)) += w;
  }
  return q;
}

InducedVectors induced_prob_vectors(std::size_t n, const Coreset& coreset) {
  if (n == 0) throw std::invalid_argument("induced_prob_vectors: empty input");
  InducedVectors v;
  v.p_in = Vector::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
  v.q_out = coreset_weights(n, coreset.indices);
  return v;
}

bool has_distinct_indices(std::span<const std::size_t> indices) {
  IndexList sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

IndexList iota_indices(std::size_t n) {
  IndexList v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

}  // namespace lrt
