#pragma once

#include <functional>
#include <optional>
#include <span>

#include "lrt/config.hpp"
#include "lrt/coreset.hpp"
#include "lrt/gs_walk.hpp"
#include "lrt/kernels.hpp"
#include "lrt/point_set.hpp"
#include "lrt/rng.hpp"

namespace lrt {

// Sequence-level thinning. `input` lists indices into the oracle's points;
// halvers pair input[2i] with input[2i+1] and return one index from each pair.

struct KhOptions {
  /// Replaces the swap-threshold constant 1/2 + log(2 n_in / delta).
  std::optional<double> threshold_constant;
};

/// Per-round record of a KH or LKH halving.
struct HalvingTrace {
  std::vector<double> alpha;
  std::vector<double> threshold;
  std::vector<int> eta;  ///< +1 keeps input[2i] in the output, -1 keeps input[2i+1]
};

IndexList thin_uniform(std::span<const std::size_t> input, std::size_t n_out,
                       RandomStream& stream);

IndexList kh_halve(const KernelOracle& oracle, std::span<const std::size_t> input, double delta,
                   RandomStream& stream, const KhOptions& options = {},
                   HalvingTrace* trace = nullptr);

/// Kernel halving with the linear kernel, O(n d) arithmetic via the running
/// signed sum psi = sum(S2) - sum(S1).
IndexList lkh_halve(const PointSet& points, std::span<const std::size_t> input, double delta,
                    RandomStream& stream, HalvingTrace* trace = nullptr);

/// LKH swap parameters: returns a and updates sigma in place.
double lkh_swap_params(double& sigma, double b, double delta);

IndexList rkh_thin(const KernelOracle& oracle, std::span<const std::size_t> input, double delta,
                   std::size_t n_out, RandomStream& stream);

struct RefineStep {
  std::size_t position = 0;  ///< coreset slot being revisited
  IndexList before;          ///< coreset before the decision
  std::size_t chosen = 0;    ///< index placed into the slot
};
using RefineTrace = std::vector<RefineStep>;

/// Greedy single-swap refinement of `coreset` toward the uniform measure on
/// `input`. Ties resolve to the earliest candidate in `input`.
IndexList refine_greedy(const KernelOracle& oracle, std::span<const std::size_t> input,
                        IndexList coreset, RefineTrace* trace = nullptr);

IndexList kh_refine(const KernelOracle& oracle, std::span<const std::size_t> input, double delta,
                    RandomStream& stream, RefineTrace* trace = nullptr);

/// Halving step used by Compress: (sequence, failure probability, stream).
using Halver =
    std::function<IndexList(std::span<const std::size_t>, double, RandomStream&)>;

/// Compress recursion with output size 2^g sqrt(n), n = |input|. Each node
/// splits into four contiguous quarters handled with child streams
/// stream.split(1..4), concatenates, and halves with its own stream. `final`
/// (if set) replaces `halve` at the root.
IndexList compress(std::span<const std::size_t> input, unsigned g, double delta,
                   RandomStream& stream, const Halver& halve, const Halver& final = {});

/// Throws std::invalid_argument unless n is a power of 4 with g <= log4 n.
void validate_compress_size(std::size_t n, unsigned g);
/// log4 n for a power of 4.
unsigned log4_exact(std::size_t n);

IndexList kh_compress(const KernelOracle& oracle, std::span<const std::size_t> input, double delta,
                      unsigned g, RandomStream& stream);
IndexList kt_compress(const KernelOracle& oracle, std::span<const std::size_t> input, double delta,
                      unsigned g, RandomStream& stream);

IndexList gs_halve(const KernelOracle& oracle, std::span<const std::size_t> input,
                   RandomStream& stream, GsImpl impl, const GsWalkOptions& options = {},
                   const GsObserver& observer = {});
IndexList gs_thin(const KernelOracle& oracle, std::span<const std::size_t> input, std::size_t n_out,
                  RandomStream& stream, GsImpl impl = GsImpl::cubic);
IndexList gs_compress(const KernelOracle& oracle, std::span<const std::size_t> input, unsigned g,
                      RandomStream& stream);

/// Number of halving rounds m with n_in = n_out 2^m, m >= 1. Throws otherwise.
unsigned halving_rounds(std::size_t n_in, std::size_t n_out);

// Point-set entry points: the input is the whole point set in row order.

Coreset thin_uniform(const PointSet& points, std::size_t n_out, RandomStream& stream);
Coreset kh_halve(const PointSet& points, const KernelSpec& kernel, double delta,
                 RandomStream& stream);
Coreset lkh_halve(const PointSet& points, double delta, RandomStream& stream);
Coreset rkh_thin(const PointSet& points, const KernelSpec& kernel, double delta, std::size_t n_out,
                 RandomStream& stream);
Coreset kh_compress(const PointSet& points, const KernelSpec& kernel, double delta, unsigned g,
                    RandomStream& stream);
Coreset kt_compress(const PointSet& points, const KernelSpec& kernel, double delta, unsigned g,
                    RandomStream& stream);
Coreset kh_refine(const PointSet& points, const KernelSpec& kernel, double delta,
                  RandomStream& stream);
Coreset gs_halve(const PointSet& points, const KernelSpec& kernel, RandomStream& stream,
                 GsImpl impl);
Coreset gs_thin(const PointSet& points, const KernelSpec& kernel, std::size_t n_out,
                RandomStream& stream, GsImpl impl = GsImpl::cubic);
Coreset gs_compress(const PointSet& points, const KernelSpec& kernel, unsigned g,
                    RandomStream& stream);

/// Dispatches on config.algorithm with stream RandomStream(config.seed).
/// LKH ignores `kernel` and thins to n_out by repeated halving.
Coreset thin(const KernelOracle& oracle, const ThinConfig& config);
Coreset thin(const PointSet& points, const KernelSpec& kernel, const ThinConfig& config,
             WorkCounters* counters = nullptr);

/// Output size of a thinning configuration on n_in points.
std::size_t thin_output_size(std::size_t n_in, const ThinConfig& config);

}  // namespace lrt
