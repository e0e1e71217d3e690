#include "lrt_cli/synthetic.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

namespace lrt::synth {

double standard_normal(RandomStream& stream) {
  // 1 - U lies in (0, 1], keeping the logarithm finite.
  const double u1 = 1.0 - stream.uniform01();
  const double u2 = stream.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Matrix uniform_cube(std::size_t n, std::size_t d, RandomStream& stream) {
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = stream.uniform01();
  return m;
}

Matrix gaussian_matrix(std::size_t n, std::size_t d, RandomStream& stream) {
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = standard_normal(stream);
  return m;
}

Regression least_squares_problem(std::size_t n, std::size_t d, double condition, double noise,
                                 RandomStream& stream) {
  const Eigen::MatrixXd G = gaussian_matrix(n, d, stream);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  const Eigen::MatrixXd U = qr.householderQ() * Eigen::MatrixXd::Identity(G.rows(), G.cols());
  Eigen::VectorXd s(static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) {
    const double frac = d > 1 ? static_cast<double>(j) / static_cast<double>(d - 1) : 0.0;
    s(static_cast<Eigen::Index>(j)) = std::pow(condition, -0.5 * frac);
  }
  const Eigen::MatrixXd V = Eigen::HouseholderQR<Eigen::MatrixXd>(
                                Eigen::MatrixXd(gaussian_matrix(d, d, stream)))
                                .householderQ();
  Regression r;
  r.features = std::sqrt(static_cast<double>(n)) * U * s.asDiagonal() * V.transpose();
  const Vector w_star = Vector(gaussian_matrix(d, 1, stream).col(0));
  r.targets = r.features * w_star;
  for (Eigen::Index i = 0; i < r.targets.size(); ++i) r.targets(i) += noise * standard_normal(stream);
  return r;
}

Regression logistic_problem(std::size_t n, std::size_t d, RandomStream& stream) {
  Regression r;
  r.features = gaussian_matrix(n, d, stream);
  const Vector w_star = Vector(gaussian_matrix(d, 1, stream).col(0));
  r.targets.resize(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < r.targets.size(); ++i) {
    const double p = 1.0 / (1.0 + std::exp(-r.features.row(i).dot(w_star)));
    r.targets(i) = stream.bernoulli(p) ? 1.0 : -1.0;
  }
  return r;
}

}  // namespace lrt::synth
