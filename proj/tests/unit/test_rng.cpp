#include <gtest/gtest.h>

#include <array>

#include <lrt/rng.hpp>

namespace lrt {
namespace {

TEST(RandomStream, DeterministicReplay) {
  RandomStream a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_EQ(a.counter(), 100u);
}

TEST(RandomStream, DistinctStreamsDiffer) {
  RandomStream a(42, 0), b(42, 1), c(43, 0);
  const auto x = a.next_u64();
  EXPECT_NE(x, b.next_u64());
  EXPECT_NE(x, c.next_u64());
}

TEST(RandomStream, Uniform01RangeAndMean) {
  RandomStream s(1);
  constexpr int kDraws = 1'000'000;
  double sum = 0;
  for (int i = 0; i < kDraws; ++i) {
    const double u = s.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / kDraws, 0.5, 0.002);
}

TEST(RandomStream, UniformIndexEdgeCases) {
  RandomStream s(3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(s.uniform_index(1), 0u);
  EXPECT_THROW(s.uniform_index(0), std::invalid_argument);
  RandomStream a(9), b(9);
  EXPECT_EQ(a.uniform_index(1000), b.uniform_index(1000));
}

TEST(RandomStream, UniformIndexFrequencies) {
  RandomStream s(5);
  std::array<int, 6> counts{};
  constexpr int kDraws = 600'000;
  for (int i = 0; i < kDraws; ++i) ++counts[s.uniform_index(6)];
  for (const int c : counts) EXPECT_NEAR(static_cast<double>(c) / kDraws, 1.0 / 6.0, 0.005);
}

TEST(RandomStream, SplitIsPureAndDistinct) {
  RandomStream root(11);
  root.next_u64();
  RandomStream c1 = root.split(1), c1b = RandomStream(11).split(1), c2 = root.split(2);
  const auto v = c1.next_u64();
  EXPECT_EQ(v, c1b.next_u64());
  EXPECT_NE(v, c2.next_u64());
}

TEST(RandomStream, BernoulliEndpoints) {
  RandomStream s(2);
  for (int i = 0; i < 100; ++i) {
    EXPECT_FALSE(s.bernoulli(0.0));
    EXPECT_TRUE(s.bernoulli(1.0));
  }
}

}  // namespace
}  // namespace lrt
