#include "lrt/point_set.hpp"

#include <stdexcept>

namespace lrt {

PointSet::PointSet(Matrix points) : points_(std::move(points)) {
  if (points_.rows() == 0 || points_.cols() == 0) {
    throw std::invalid_argument("PointSet: need n >= 1 and d >= 1");
  }
  if (!points_.allFinite()) throw std::invalid_argument("PointSet: non-finite entry");
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("PointSet: no rows");
  const std::size_t d = rows.front().size();
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) throw std::invalid_argument("PointSet: ragged rows");
    for (std::size_t j = 0; j < d; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return PointSet(std::move(m));
}

PointSet PointSet::subset(std::span<const std::size_t> indices) const {
  Matrix m(static_cast<Eigen::Index>(indices.size()), points_.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= size()) throw std::out_of_range("PointSet::subset: index out of range");
    m.row(static_cast<Eigen::Index>(r)) = points_.row(static_cast<Eigen::Index>(indices[r]));
  }
  return PointSet(std::move(m));
}

PointSet PointSet::head(std::size_t n) const {
  if (n == 0 || n > size()) throw std::invalid_argument("PointSet::head: invalid size");
  return PointSet(Matrix(points_.topRows(static_cast<Eigen::Index>(n))));
}

PointSet hconcat(const PointSet& a, const PointSet& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hconcat: row counts differ");
  Matrix m(a.matrix().rows(), a.matrix().cols() + b.matrix().cols());
  m << a.matrix(), b.matrix();
  return PointSet(std::move(m));
}

PointSet vconcat(const PointSet& a, const PointSet& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("vconcat: dimensions differ");
  Matrix m(a.matrix().rows() + b.matrix().rows(), a.matrix().cols());
  m << a.matrix(), b.matrix();
  return PointSet(std::move(m));
}

}  // namespace lrt
