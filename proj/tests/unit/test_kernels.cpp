#include <gtest/gtest.h>

#include <cmath>

#include <lrt/kernels.hpp>

#include "test_support.hpp"

namespace lrt {
namespace {

TEST(KernelEval, GaussianAtZeroDistance) {
  const std::vector<double> x{0.3, -1.2};
  EXPECT_EQ(kernel_eval(GaussianKernel{1.0}, x, x), 1.0);
}

TEST(KernelEval, GaussianValue) {
  const std::vector<double> x{0.0, 0.0}, y{1.0, 2.0};
  EXPECT_NEAR(kernel_eval(GaussianKernel{0.5}, x, y), std::exp(-2.5), 1e-15);
}

TEST(KernelEval, LinearDotProduct) {
  const std::vector<double> x{1, 2}, y{3, 4};
  EXPECT_EQ(kernel_eval(LinearKernel{}, x, y), 11.0);
}

TEST(KernelEval, AttentionAtOrigin) {
  const std::vector<double> x{0.0, 0.0, 1.0};
  EXPECT_EQ(kernel_eval(AttentionKernel{2}, x, x), 1.0);
}

TEST(KernelEval, AttentionValue) {
  // key part (1,0) against (0.5, 0.5); value part (2, 1) against (1, 3).
  const std::vector<double> x{1.0, 0.0, 2.0, 1.0}, y{0.5, 0.5, 1.0, 3.0};
  EXPECT_NEAR(kernel_eval(AttentionKernel{2}, x, y), std::exp(0.5) * 5.0, 1e-14);
}

TEST(KernelEval, Errors) {
  const std::vector<double> x{1, 2}, y{1, 2, 3};
  EXPECT_THROW(kernel_eval(GaussianKernel{1.0}, x, y), std::invalid_argument);
  EXPECT_THROW(kernel_eval(GaussianKernel{-1.0}, x, x), std::invalid_argument);
  const std::vector<double> bad{1, std::nan("")};
  EXPECT_THROW(kernel_eval(LinearKernel{}, bad, bad), std::invalid_argument);
  EXPECT_THROW(kernel_eval(AttentionKernel{2}, x, x), std::invalid_argument);
}

TEST(DeepKernel, IdenticalInputsGiveOne) {
  const std::vector<double> x{0.1, 0.2}, phi{1.0, -1.0, 0.5};
  EXPECT_EQ(deep_kernel_eval(0.3, 1.0, 2.0, x, x, phi, phi), 1.0);
}

TEST(DeepKernel, ApproachesOuterGaussianAsEpsToOne) {
  const std::vector<double> x{0.1, 0.2}, y{0.4, -0.3}, px{1.0}, py{-2.0};
  const double q = kernel_eval(GaussianKernel{1.5}, x, y);
  EXPECT_NEAR(deep_kernel_eval(1.0 - 1e-12, 1.5, 0.7, x, y, px, py), q, 1e-11);
  EXPECT_THROW(deep_kernel_eval(1.0, 1.5, 0.7, x, y, px, py), std::invalid_argument);
  EXPECT_THROW(deep_kernel_eval(0.0, 1.5, 0.7, x, y, px, py), std::invalid_argument);
}

TEST(DeepKernel, MatchesComposedGaussians) {
  const Matrix pts = testing::normal_matrix(2, 5, 17);
  const std::vector<double> x(pts.row(0).data(), pts.row(0).data() + 2);
  const std::vector<double> y(pts.row(1).data(), pts.row(1).data() + 2);
  const std::vector<double> px(pts.row(0).data() + 2, pts.row(0).data() + 5);
  const std::vector<double> py(pts.row(1).data() + 2, pts.row(1).data() + 5);
  const double expected = (0.5 * kernel_eval(GaussianKernel{0.8}, px, py) + 0.5) *
                          kernel_eval(GaussianKernel{1.3}, x, y);
  EXPECT_NEAR(deep_kernel_eval(0.5, 1.3, 0.8, x, y, px, py), expected, 1e-15);
  const DeepKernel spec{0.5, 1.3, 0.8, 2};
  EXPECT_NEAR(kernel_eval(spec, std::span<const double>(pts.row(0).data(), 5),
                          std::span<const double>(pts.row(1).data(), 5)),
              expected, 1e-15);
}

TEST(KernelMatrix, GaussianDiagonalIsOne) {
  const Matrix K = kernel_matrix(GaussianKernel{2.0}, testing::uniform_points(20, 3, 1));
  for (Eigen::Index i = 0; i < K.rows(); ++i) EXPECT_EQ(K(i, i), 1.0);
  EXPECT_EQ(K, K.transpose());
}

TEST(KernelMatrix, LinearMatchesGram) {
  const PointSet p = testing::normal_points(15, 4, 2);
  const Matrix K = kernel_matrix(LinearKernel{}, p);
  const Matrix G = p.matrix() * p.matrix().transpose();
  EXPECT_LE((K - G).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(KernelMatrix, TabulatedReturnsInput) {
  const Matrix base = kernel_matrix(GaussianKernel{1.0}, testing::uniform_points(6, 2, 3));
  const TabulatedKernel tab{std::make_shared<const Matrix>(base)};
  Matrix idx(6, 1);
  for (int i = 0; i < 6; ++i) idx(i, 0) = i;
  EXPECT_EQ(kernel_matrix(tab, PointSet(idx)), base);
}

TEST(KernelMatrix, CrossMatchesPointwise) {
  const PointSet a = testing::uniform_points(4, 2, 5), b = testing::uniform_points(3, 2, 6);
  const Matrix C = cross_kernel_matrix(GaussianKernel{1.0}, a, b);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                kernel_eval(GaussianKernel{1.0}, a.row(i), b.row(j)));
    }
  }
}

TEST(KernelOracle, CountsEveryLookup) {
  WorkCounters c;
  const KernelOracle o(GaussianKernel{1.0}, testing::uniform_points(8, 2, 1), &c);
  o(0, 1);
  o(2, 2);
  EXPECT_EQ(c.kernel_evals, 2u);
  const KernelOracle m = o.materialized();
  EXPECT_EQ(c.kernel_evals, 2u);
  EXPECT_EQ(m(0, 1), o(0, 1));
  EXPECT_EQ(c.kernel_evals, 4u);
}

TEST(ParseKernel, RoundTripsAndRejects) {
  const KernelSpec g = parse_kernel("gaussian:eta=1.5");
  ASSERT_TRUE(std::holds_alternative<GaussianKernel>(g));
  EXPECT_EQ(std::get<GaussianKernel>(g).eta, 1.5);
  EXPECT_TRUE(std::holds_alternative<LinearKernel>(parse_kernel("linear")));
  const KernelSpec d = parse_kernel("deep:eps=0.1,eta_q=1,eta_kappa=2,input_dim=2");
  ASSERT_TRUE(std::holds_alternative<DeepKernel>(d));
  EXPECT_EQ(std::get<DeepKernel>(d).input_dim, 2u);
  const KernelSpec again = parse_kernel(describe_kernel(g));
  EXPECT_EQ(std::get<GaussianKernel>(again).eta, 1.5);
  EXPECT_THROW(parse_kernel("poly"), std::invalid_argument);
  EXPECT_THROW(parse_kernel("gaussian:eta=-1"), std::invalid_argument);
}

TEST(MedianHeuristic, InverseMedianSquaredDistance) {
  const PointSet p = PointSet::from_rows({{0.0}, {1.0}, {3.0}});
  // squared distances 1, 9, 4 -> median 4
  EXPECT_DOUBLE_EQ(median_heuristic_eta(p), 0.25);
}

}  // namespace
}  // namespace lrt
