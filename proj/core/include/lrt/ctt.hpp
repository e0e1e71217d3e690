#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lrt/coreset.hpp"
#include "lrt/kernels.hpp"
#include "lrt/point_set.hpp"
#include "lrt/rng.hpp"

namespace lrt {

struct CttConfig {
  std::size_t s = 16;   ///< total number of coresets
  unsigned g = 0;       ///< compression level
  double delta = 0.5;   ///< KT-Compress failure probability
  std::size_t B = 39;   ///< permutation replicates
  double alpha = 0.05;
  std::uint64_t seed = 0;
  bool shuffle = false;  ///< pre-shuffle each sample before binning
};

struct TestOutcome {
  double statistic = 0.0;
  std::vector<double> permuted;
  std::size_t rank = 0;  ///< R in 1..B+1
  double reject_prob = 0.0;
  bool rejected = false;
  std::uint64_t runtime_ns = 0;
};

/// Bin counts s_m = s m / (m+n), s_n = s n / (m+n) and the common bin size.
struct CttLayout {
  std::size_t s_m = 0;
  std::size_t s_n = 0;
  std::size_t bin_size = 0;
  std::size_t n_out = 0;
};
/// Throws std::invalid_argument for non-integer bin counts or bin sizes
/// invalid for KT-Compress at level g.
CttLayout ctt_layout(std::size_t m, std::size_t n, std::size_t s, unsigned g);

/// Rank of the last entry among all values (1-based), ties broken uniformly
/// at random, followed by min(1, max(0, R - (1 - alpha)(B + 1))).
struct RankDecision {
  std::size_t rank = 0;
  double reject_prob = 0.0;
  bool rejected = false;
};
RankDecision randomized_rank_decision(std::span<const double> permuted, double statistic,
                                      double alpha, RandomStream& stream);

/// MMD between the averaged coreset measures (1/s_m) sum P_out^(i) and
/// (1/s_n) sum Q_out^(j); coreset indices address the oracle's points.
double coreset_mmd(const std::vector<IndexList>& coresets_x, const std::vector<IndexList>& coresets_y,
                   const KernelOracle& oracle);

/// Compress Then Test. The kernel sees X rows followed by Y rows.
TestOutcome ctt_test(const PointSet& X, const PointSet& Y, const KernelSpec& kernel,
                     const CttConfig& config, WorkCounters* counters = nullptr);

/// Baseline: uniform subsample of n_sub points from each sample, exact MMD
/// with a point-level permutation null and the same rejection rule.
TestOutcome subsample_mmd_test(const PointSet& X, const PointSet& Y, const KernelSpec& kernel,
                               std::size_t n_sub, std::size_t B, double alpha, std::uint64_t seed,
                               WorkCounters* counters = nullptr);

/// delta = min(b/6, (b/2)^(1/floor(alpha (B+1))) alpha / (30 e s)) with
/// b = beta / (1 + beta/2). Throws if floor(alpha (B+1)) == 0.
double ctt_default_delta(double alpha, double beta, std::size_t B, std::size_t s);

}  // namespace lrt
