#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include <lrt/metrics.hpp>
#include <lrt/thinning.hpp>

#include "test_support.hpp"

namespace lrt {
namespace {

KernelOracle gaussian_oracle(std::size_t n, std::uint64_t seed, WorkCounters* c = nullptr) {
  return KernelOracle(GaussianKernel{1.0}, testing::uniform_points(n, 2, seed), c);
}

TEST(ThinUniform, FullSizeIsPermutation) {
  RandomStream s(1);
  IndexList out = thin_uniform(iota_indices(10), 10, s);
  std::sort(out.begin(), out.end());
  EXPECT_EQ(out, iota_indices(10));
}

TEST(ThinUniform, PairFrequencies) {
  RandomStream s(2);
  std::map<std::pair<std::size_t, std::size_t>, int> counts;
  constexpr int kTrials = 100'000;
  const IndexList all = iota_indices(4);
  for (int t = 0; t < kTrials; ++t) {
    IndexList out = thin_uniform(all, 2, s);
    std::sort(out.begin(), out.end());
    ++counts[{out[0], out[1]}];
  }
  ASSERT_EQ(counts.size(), 6u);
  for (const auto& [pair, c] : counts) {
    EXPECT_NEAR(static_cast<double>(c) / kTrials, 1.0 / 6.0, 0.01);
  }
}

TEST(ThinUniform, DeterministicAndValidated) {
  RandomStream a(3), b(3);
  EXPECT_EQ(thin_uniform(iota_indices(50), 7, a), thin_uniform(iota_indices(50), 7, b));
  EXPECT_THROW(thin_uniform(iota_indices(5), 6, a), std::invalid_argument);
}

TEST(KhHalve, OnePerPairAndDeterministic) {
  const KernelOracle o = gaussian_oracle(64, 1);
  RandomStream a(5), b(5);
  const IndexList out = kh_halve(o, iota_indices(64), 0.5, a);
  ASSERT_EQ(out.size(), 32u);
  for (std::size_t i = 0; i < 32; ++i) EXPECT_TRUE(out[i] == 2 * i || out[i] == 2 * i + 1);
  EXPECT_EQ(out, kh_halve(o, iota_indices(64), 0.5, b));
}

TEST(KhHalve, FirstRoundIsFair) {
  const KernelOracle o = gaussian_oracle(2, 2);
  RandomStream s(7);
  int kept_first = 0;
  constexpr int kTrials = 100'000;
  const IndexList in{0, 1};
  for (int t = 0; t < kTrials; ++t) kept_first += kh_halve(o, in, 0.5, s)[0] == 0 ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(kept_first) / kTrials, 0.5, 0.005);
}

TEST(KhHalve, DuplicatePairLeavesMmdUnchanged) {
  Matrix pts = testing::uniform_points(8, 2, 3).matrix();
  pts.row(3) = pts.row(2);
  const KernelOracle o(GaussianKernel{1.0}, PointSet(pts));
  RandomStream s(4);
  HalvingTrace trace;
  IndexList out = kh_halve(o, iota_indices(8), 0.5, s, {}, &trace);
  const double before = mmd_to_coreset(o, iota_indices(8), out);
  out[1] = out[1] == 2 ? 3 : 2;
  EXPECT_NEAR(mmd_to_coreset(o, iota_indices(8), out), before, 1e-14);
  ASSERT_EQ(trace.eta.size(), 4u);
}

TEST(KhHalve, Validation) {
  const KernelOracle o = gaussian_oracle(8, 1);
  RandomStream s(1);
  EXPECT_THROW(kh_halve(o, iota_indices(7), 0.5, s), std::invalid_argument);
  EXPECT_THROW(kh_halve(o, iota_indices(8), 1.5, s), std::invalid_argument);
  EXPECT_THROW(kh_halve(o, iota_indices(8), 0.0, s), std::invalid_argument);
}

TEST(LkhHalve, IdenticalPointsAnySelection) {
  const PointSet p(Matrix::Ones(8, 3));
  RandomStream s(1);
  const IndexList out = lkh_halve(p, iota_indices(8), 0.5, s);
  EXPECT_EQ(out.size(), 4u);
}

TEST(LkhHalve, TwoPointsFair) {
  const PointSet p = testing::normal_points(2, 3, 1);
  RandomStream s(2);
  int kept_first = 0;
  constexpr int kTrials = 100'000;
  const IndexList in{0, 1};
  for (int t = 0; t < kTrials; ++t) kept_first += lkh_halve(p, in, 0.5, s)[0] == 0 ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(kept_first) / kTrials, 0.5, 0.005);
}

TEST(LkhSwapParams, ZeroDistanceGivesZeroThreshold) {
  double sigma = 0.0;
  EXPECT_EQ(lkh_swap_params(sigma, 0.0, 0.5), 0.0);
  EXPECT_EQ(sigma, 0.0);
  const double a = lkh_swap_params(sigma, 1.0, 0.5);
  EXPECT_GT(a, 0.0);
  EXPECT_GT(sigma, 0.0);
}

TEST(RkhThin, SingleRoundEqualsKhHalve) {
  const KernelOracle o = gaussian_oracle(32, 4);
  RandomStream a(9), b(9);
  EXPECT_EQ(rkh_thin(o, iota_indices(32), 0.5, 16, a), kh_halve(o, iota_indices(32), 0.5, b));
}

TEST(RkhThin, OutputNestedInEveryRound) {
  const KernelOracle o = gaussian_oracle(1024, 5);
  RandomStream s(10), replay(10);
  const IndexList out = rkh_thin(o, iota_indices(1024), 0.5, 32, s);
  ASSERT_EQ(out.size(), 32u);
  IndexList current = iota_indices(1024);
  for (int r = 0; r < 5; ++r) {
    current = kh_halve(o, current, 0.5 / 5.0, replay);
    const std::set<std::size_t> round(current.begin(), current.end());
    for (std::size_t i : out) EXPECT_TRUE(round.count(i) == 1);
  }
  EXPECT_EQ(current, out);
}

TEST(Compress, FullLevelIsIdentity) {
  const KernelOracle o = gaussian_oracle(64, 6);
  RandomStream s(1);
  EXPECT_EQ(kh_compress(o, iota_indices(64), 0.5, 3, s), iota_indices(64));
  EXPECT_EQ(kt_compress(o, iota_indices(64), 0.5, 3, s), iota_indices(64));
  EXPECT_EQ(gs_compress(o, iota_indices(64), 3, s), iota_indices(64));
}

TEST(Compress, LevelZeroSizeAndDistinct) {
  const KernelOracle o = gaussian_oracle(256, 7);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RandomStream s(seed);
    const IndexList kh = kh_compress(o, iota_indices(256), 0.5, 0, s);
    EXPECT_EQ(kh.size(), 16u);
    EXPECT_TRUE(has_distinct_indices(kh));
    const IndexList gs = gs_compress(o, iota_indices(256), 0, s);
    EXPECT_EQ(gs.size(), 16u);
    EXPECT_TRUE(has_distinct_indices(gs));
  }
}

TEST(Compress, KtUsesRefinementAtRoot) {
  const KernelOracle o = gaussian_oracle(256, 8);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RandomStream s(seed);
    const IndexList out = kt_compress(o, iota_indices(256), 0.5, 1, s);
    EXPECT_EQ(out.size(), 32u);
  }
}

TEST(Compress, SizeValidation) {
  EXPECT_NO_THROW(validate_compress_size(256, 4));
  EXPECT_THROW(validate_compress_size(256, 5), std::invalid_argument);
  EXPECT_THROW(validate_compress_size(128, 0), std::invalid_argument);
  EXPECT_EQ(log4_exact(1024), 5u);
}

TEST(Compress, KernelEvalsBelowRkh) {
  WorkCounters c_khc, c_rkh;
  const KernelOracle a = gaussian_oracle(1024, 9, &c_khc);
  const KernelOracle b = gaussian_oracle(1024, 9, &c_rkh);
  RandomStream s1(1), s2(1);
  kh_compress(a, iota_indices(1024), 0.5, 1, s1);
  rkh_thin(b, iota_indices(1024), 0.5, 64, s2);
  EXPECT_LT(c_khc.kernel_evals, c_rkh.kernel_evals);
}

double coreset_mmd2(const KernelOracle& o, std::span<const std::size_t> input, const IndexList& c) {
  const double m = mmd_to_coreset(o, input, c);
  return m * m;
}

TEST(Refine, NeverIncreasesMmd) {
  const KernelOracle o = gaussian_oracle(64, 10);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomStream s(seed);
    const IndexList initial = kh_halve(o, iota_indices(64), 0.5, s);
    RefineTrace trace;
    const IndexList refined = refine_greedy(o, iota_indices(64), initial, &trace);
    EXPECT_LE(coreset_mmd2(o, iota_indices(64), refined),
              coreset_mmd2(o, iota_indices(64), initial) + 1e-14);
    for (const RefineStep& step : trace) {
      IndexList after = step.before;
      after[step.position] = step.chosen;
      EXPECT_LE(coreset_mmd2(o, iota_indices(64), after),
                coreset_mmd2(o, iota_indices(64), step.before) + 1e-14);
    }
  }
}

TEST(Refine, EachSwapIsExhaustiveArgmin) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const KernelOracle o = gaussian_oracle(16, 100 + seed);
    RandomStream s(seed);
    const IndexList all = iota_indices(16);
    const IndexList initial = thin_uniform(all, 4, s);
    RefineTrace trace;
    refine_greedy(o, all, initial, &trace);
    ASSERT_EQ(trace.size(), 4u);
    for (const RefineStep& step : trace) {
      double best = 1e300;
      std::size_t best_idx = 0;
      for (std::size_t cand : all) {
        IndexList trial = step.before;
        trial[step.position] = cand;
        const double v = coreset_mmd2(o, all, trial);
        if (v < best - 1e-13) {
          best = v;
          best_idx = cand;
        }
      }
      EXPECT_EQ(step.chosen, best_idx);
    }
  }
}

TEST(Refine, CanIntroduceDuplicates) {
  // Input mass sits mostly at the origin; a coreset of two must place both
  // points there.
  const PointSet p = PointSet::from_rows({{0.0}, {0.0}, {0.0}, {0.0}, {0.0}, {0.0}, {5.0}, {0.0}});
  const KernelOracle o(GaussianKernel{1.0}, p);
  const IndexList all = iota_indices(8);
  const IndexList refined = refine_greedy(o, all, IndexList{6, 0}, nullptr);
  EXPECT_EQ(refined, (IndexList{0, 0}));
  EXPECT_FALSE(has_distinct_indices(refined));
}

TEST(Refine, OptimalStartUnchanged) {
  const PointSet p = PointSet::from_rows({{0.0}, {0.3}, {2.6}, {3.1}, {6.4}, {5.9}, {9.2}, {8.5}});
  const KernelOracle o(GaussianKernel{1.0}, p);
  const IndexList all = iota_indices(8);
  // Brute force the best coreset of size 2 among all ordered pairs.
  double best = 1e300;
  IndexList best_c;
  for (std::size_t a = 0; a < 8; ++a) {
    for (std::size_t b = 0; b < 8; ++b) {
      const IndexList c{a, b};
      const double v = coreset_mmd2(o, all, c);
      if (v < best - 1e-13) {
        best = v;
        best_c = c;
      }
    }
  }
  EXPECT_EQ(refine_greedy(o, all, best_c, nullptr), best_c);
}

TEST(Refine, TiesResolveToEarliestCandidate) {
  const PointSet p(Matrix::Zero(4, 1));
  const KernelOracle o(GaussianKernel{1.0}, p);
  EXPECT_EQ(refine_greedy(o, iota_indices(4), IndexList{3, 2}, nullptr), (IndexList{0, 0}));
}

TEST(GsHalve, TwoPointsFair) {
  const KernelOracle o = gaussian_oracle(2, 3);
  RandomStream s(4);
  int kept_first = 0;
  constexpr int kTrials = 20'000;
  const IndexList in{0, 1};
  for (int t = 0; t < kTrials; ++t) {
    kept_first += gs_halve(o, in, s, GsImpl::cubic)[0] == 0 ? 1 : 0;
  }
  EXPECT_NEAR(static_cast<double>(kept_first) / kTrials, 0.5, 0.015);
}

TEST(GsHalve, QuarticAndCubicAgree) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const KernelOracle o(GaussianKernel{1.0}, testing::uniform_points(32, 3, seed));
    RandomStream a(seed, 1), b(seed, 1);
    EXPECT_EQ(gs_halve(o, iota_indices(32), a, GsImpl::quartic),
              gs_halve(o, iota_indices(32), b, GsImpl::cubic));
  }
}

TEST(GsHalve, MaintainedInverseTracksFreshInverse) {
  const KernelOracle o(GaussianKernel{1.0}, testing::uniform_points(40, 3, 77));
  const Matrix Q = paired_difference_matrix(o, iota_indices(40));
  RandomStream s(1);
  std::size_t checked = 0;
  const GsObserver check = [&](const GsIterationView& v) {
    if (v.inverse == nullptr || v.active.empty()) return;
    const auto m = static_cast<Eigen::Index>(v.active.size());
    Eigen::MatrixXd sub(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        sub(i, j) = (*v.Q)(static_cast<Eigen::Index>(v.active[static_cast<std::size_t>(i)]),
                           static_cast<Eigen::Index>(v.active[static_cast<std::size_t>(j)]));
      }
    }
    const Eigen::MatrixXd fresh = sub.inverse();
    EXPECT_LE((*v.inverse - fresh).norm(), 1e-6 * fresh.norm());
    ++checked;
  };
  GsWalkOptions opt;
  opt.validate_inverse = true;
  const GsWalkResult r = kernel_gs_walk(Q, s, GsImpl::cubic, opt, nullptr, check);
  EXPECT_GT(checked, 0u);
  EXPECT_FALSE(r.fell_back);
  for (Eigen::Index i = 0; i < r.z.size(); ++i) EXPECT_EQ(std::abs(r.z(i)), 1.0);
}

TEST(GsThin, SingleRoundEqualsHalveAndSizeExact) {
  const KernelOracle o = gaussian_oracle(64, 12);
  RandomStream a(3), b(3);
  EXPECT_EQ(gs_thin(o, iota_indices(64), 32, a), gs_halve(o, iota_indices(64), b, GsImpl::cubic));
  RandomStream c(4);
  EXPECT_EQ(gs_thin(o, iota_indices(64), 8, c).size(), 8u);
}

TEST(Thin, DispatchAndSizes) {
  const PointSet p = testing::uniform_points(64, 2, 13);
  const KernelSpec k = GaussianKernel{1.0};
  const std::pair<Algorithm, std::size_t> sized[] = {{Algorithm::uniform, 10},
                                                     {Algorithm::kh, 32},
                                                     {Algorithm::lkh, 16},
                                                     {Algorithm::rkh, 8},
                                                     {Algorithm::gs_thin, 16}};
  for (const auto& [algo, n_out] : sized) {
    ThinConfig cfg;
    cfg.algorithm = algo;
    cfg.n_out = n_out;
    cfg.seed = 5;
    WorkCounters c;
    EXPECT_EQ(thin(p, k, cfg, &c).size(), n_out) << algorithm_name(algo);
    EXPECT_EQ(thin_output_size(64, cfg), n_out);
  }
  for (Algorithm algo : {Algorithm::kh_compress, Algorithm::kt_compress, Algorithm::gs_compress}) {
    ThinConfig cfg;
    cfg.algorithm = algo;
    cfg.g = 1;
    EXPECT_EQ(thin(p, k, cfg).size(), 16u) << algorithm_name(algo);
  }
}

TEST(Thin, ConfigValidation) {
  ThinConfig cfg;
  cfg.algorithm = Algorithm::rkh;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.n_out = 4;
  cfg.delta = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_EQ(parse_algorithm("khc"), Algorithm::kh_compress);
  EXPECT_EQ(algorithm_name(Algorithm::gs_compress), "gsc");
  EXPECT_THROW(parse_algorithm("nope"), std::invalid_argument);
  cfg.delta = 0.5;
  EXPECT_THROW(thin_output_size(48, cfg), std::invalid_argument);
}

}  // namespace
}  // namespace lrt
