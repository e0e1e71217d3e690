#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include <lrt/ctt.hpp>
#include <lrt/metrics.hpp>

#include "test_support.hpp"

namespace lrt {
namespace {

TEST(RankDecision, NoPermutationsGivesLevel) {
  RandomStream s(1);
  const RankDecision d = randomized_rank_decision({}, 0.3, 0.05, s);
  EXPECT_EQ(d.rank, 1u);
  EXPECT_NEAR(d.reject_prob, 0.05, 1e-15);
}

TEST(RankDecision, LargestStatisticRejects) {
  RandomStream s(2);
  const std::vector<double> perm(39, 0.1);
  const RankDecision d = randomized_rank_decision(perm, 0.5, 0.05, s);
  EXPECT_EQ(d.rank, 40u);
  EXPECT_EQ(d.reject_prob, 1.0);
  EXPECT_TRUE(d.rejected);
}

TEST(RankDecision, SmallestStatisticAccepts) {
  RandomStream s(3);
  const std::vector<double> perm(39, 0.9);
  const RankDecision d = randomized_rank_decision(perm, 0.5, 0.05, s);
  EXPECT_EQ(d.rank, 1u);
  EXPECT_EQ(d.reject_prob, 0.0);
  EXPECT_FALSE(d.rejected);
}

TEST(RankDecision, TiesBrokenUniformly) {
  RandomStream s(4);
  const std::vector<double> perm(3, 0.5);
  std::vector<int> counts(4, 0);
  for (int t = 0; t < 40'000; ++t) ++counts[randomized_rank_decision(perm, 0.5, 0.05, s).rank - 1];
  for (int c : counts) EXPECT_NEAR(c / 40'000.0, 0.25, 0.01);
}

TEST(CoresetMmd, IdenticalCollectionsGiveZero) {
  const KernelOracle o(GaussianKernel{1.0}, testing::uniform_points(20, 2, 1));
  const std::vector<IndexList> a{{0, 1, 2}, {5, 6, 7}};
  EXPECT_NEAR(coreset_mmd(a, a, o), 0.0, 1e-12);
}

TEST(CoresetMmd, SingleCoresetsMatchPlainMmd) {
  const PointSet p = testing::uniform_points(12, 2, 2);
  const Matrix K = kernel_matrix(GaussianKernel{1.0}, p);
  const KernelOracle o(GaussianKernel{1.0}, p);
  const IndexList x{0, 3, 4}, y{7, 9, 11};
  Vector px = Vector::Zero(12), py = Vector::Zero(12);
  for (std::size_t i : x) px(static_cast<Eigen::Index>(i)) += 1.0 / 3.0;
  for (std::size_t i : y) py(static_cast<Eigen::Index>(i)) += 1.0 / 3.0;
  EXPECT_NEAR(coreset_mmd({x}, {y}, o), mmd(K, px, py), 1e-12);
}

TEST(CoresetMmd, OrderOfCoresetsIrrelevant) {
  const KernelOracle o(GaussianKernel{1.0}, testing::uniform_points(30, 2, 3));
  const std::vector<IndexList> x{{0, 1}, {2, 3}, {4, 5}}, xr{{4, 5}, {0, 1}, {2, 3}};
  const std::vector<IndexList> y{{10, 11}, {20, 21}}, yr{{20, 21}, {10, 11}};
  EXPECT_NEAR(coreset_mmd(x, y, o), coreset_mmd(xr, yr, o), 1e-12);
}

TEST(CttLayout, BinsAndValidation) {
  const CttLayout l = ctt_layout(1024, 1024, 8, 2);
  EXPECT_EQ(l.s_m, 4u);
  EXPECT_EQ(l.s_n, 4u);
  EXPECT_EQ(l.bin_size, 256u);
  EXPECT_EQ(l.n_out, 64u);
  EXPECT_THROW(ctt_layout(1000, 1024, 8, 2), std::invalid_argument);
  EXPECT_THROW(ctt_layout(1024, 1024, 8, 5), std::invalid_argument);
}

TEST(Ctt, DeterministicAndShaped) {
  const PointSet X = testing::normal_points(256, 2, 1), Y = testing::normal_points(256, 2, 2);
  CttConfig cfg;
  cfg.s = 8;
  cfg.g = 1;
  cfg.B = 19;
  cfg.seed = 5;
  WorkCounters c;
  const TestOutcome a = ctt_test(X, Y, GaussianKernel{0.5}, cfg, &c);
  const TestOutcome b = ctt_test(X, Y, GaussianKernel{0.5}, cfg);
  EXPECT_EQ(a.statistic, b.statistic);
  EXPECT_EQ(a.permuted, b.permuted);
  EXPECT_EQ(a.rank, b.rank);
  EXPECT_EQ(a.permuted.size(), 19u);
  EXPECT_GE(a.rank, 1u);
  EXPECT_LE(a.rank, 20u);
  EXPECT_GT(c.kernel_evals, 0u);
}

TEST(Ctt, DetectsLargeShift) {
  const PointSet X = testing::normal_points(256, 2, 3);
  Matrix ym = testing::normal_points(256, 2, 4).matrix();
  ym.col(0).array() += 2.0;
  CttConfig cfg;
  cfg.s = 8;
  cfg.g = 1;
  cfg.seed = 1;
  EXPECT_TRUE(ctt_test(X, PointSet(ym), GaussianKernel{0.5}, cfg).rejected);
}

TEST(Ctt, DeepKernelOnConcatenatedEmbeddings) {
  const PointSet X = hconcat(testing::normal_points(128, 2, 5), testing::normal_points(128, 3, 6));
  const PointSet Y = hconcat(testing::normal_points(128, 2, 7), testing::normal_points(128, 3, 8));
  CttConfig cfg;
  cfg.s = 4;
  cfg.B = 9;
  const TestOutcome o = ctt_test(X, Y, DeepKernel{0.5, 1.0, 1.0, 2}, cfg);
  EXPECT_EQ(o.permuted.size(), 9u);
}

TEST(SubsampleTest, FullSizeIsExactPermutationTest) {
  const PointSet X = testing::normal_points(32, 2, 9), Y = testing::normal_points(32, 2, 10);
  const TestOutcome o = subsample_mmd_test(X, Y, GaussianKernel{1.0}, 32, 19, 0.05, 3);
  const PointSet Z = vconcat(X, Y);
  const Matrix K = kernel_matrix(GaussianKernel{1.0}, Z);
  Vector p = Vector::Zero(64), q = Vector::Zero(64);
  p.head(32).setConstant(1.0 / 32.0);
  q.tail(32).setConstant(1.0 / 32.0);
  EXPECT_NEAR(o.statistic, mmd(K, p, q), 1e-12);
  EXPECT_EQ(o.permuted.size(), 19u);
  EXPECT_THROW(subsample_mmd_test(X, Y, GaussianKernel{1.0}, 33, 19, 0.05, 3),
               std::invalid_argument);
}

TEST(DefaultDelta, FormulaAndValidation) {
  const double beta = 0.2, alpha = 0.05;
  const std::size_t B = 39, s = 16;
  const double b = beta / (1.0 + beta / 2.0);
  const double expected =
      std::min(b / 6.0, std::pow(b / 2.0, 1.0 / 2.0) * alpha / (30.0 * std::exp(1.0) * 16.0));
  EXPECT_NEAR(ctt_default_delta(alpha, beta, B, s), expected, 1e-15);
  EXPECT_THROW(ctt_default_delta(0.01, beta, 39, s), std::invalid_argument);
}

}  // namespace
}  // namespace lrt
