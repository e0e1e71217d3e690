#pragma once

#include <span>

#include "lrt/types.hpp"

namespace lrt {

/// An ordered collection of n points in R^d. Row order matters: the halving
/// algorithms pair rows (0,1), (2,3), ...
class PointSet {
 public:
  PointSet() = default;
  /// Throws std::invalid_argument if empty or if any entry is non-finite.
  explicit PointSet(Matrix points);

  static PointSet from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(points_.cols()); }
  const Matrix& matrix() const { return points_; }

  std::span<const double> row(std::size_t i) const {
    return {points_.data() + i * dim(), dim()};
  }

  /// Rows selected by `indices`, in the given order.
  PointSet subset(std::span<const std::size_t> indices) const;
  /// Keeps the first `n` rows.
  PointSet head(std::size_t n) const;

 private:
  Matrix points_;
};

/// Column-wise concatenation [a | b]; used to pair raw points with
/// externally computed embeddings.
PointSet hconcat(const PointSet& a, const PointSet& b);
/// Row-wise concatenation.
PointSet vconcat(const PointSet& a, const PointSet& b);

}  // namespace lrt
