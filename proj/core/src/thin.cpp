#include <stdexcept>

#include "lrt/thinning.hpp"

namespace lrt {

namespace {

std::size_t compress_size(std::size_t n_in, unsigned g) {
  validate_compress_size(n_in, g);
  return (std::size_t{1} << g) * (std::size_t{1} << log4_exact(n_in));
}

}  // namespace

Coreset thin_uniform(const PointSet& points, std::size_t n_out, RandomStream& stream) {
  const IndexList all = iota_indices(points.size());
  return {thin_uniform(all, n_out, stream)};
}

Coreset kh_halve(const PointSet& points, const KernelSpec& kernel, double delta,
                 RandomStream& stream) {
  const KernelOracle oracle(kernel, points);
  return {kh_halve(oracle, iota_indices(points.size()), delta, stream)};
}

Coreset lkh_halve(const PointSet& points, double delta, RandomStream& stream) {
  return {lkh_halve(points, iota_indices(points.size()), delta, stream)};
}

Coreset rkh_thin(const PointSet& points, const KernelSpec& kernel, double delta, std::size_t n_out,
                 RandomStream& stream) {
  const KernelOracle oracle(kernel, points);
  return {rkh_thin(oracle, iota_indices(points.size()), delta, n_out, stream)};
}

Coreset kh_compress(const PointSet& points, const KernelSpec& kernel, double delta, unsigned g,
                    RandomStream& stream) {
  const KernelOracle oracle(kernel, points);
  return {kh_compress(oracle, iota_indices(points.size()), delta, g, stream)};
}

Coreset kt_compress(const PointSet& points, const KernelSpec& kernel, double delta, unsigned g,
                    RandomStream& stream) {
  const KernelOracle oracle(kernel, points);
  return {kt_compress(oracle, iota_indices(points.size()), delta, g, stream)};
}

Coreset kh_refine(const PointSet& points, const KernelSpec& kernel, double delta,
                  RandomStream& stream) {
  const KernelOracle oracle(kernel, points);
  return {kh_refine(oracle, iota_indices(points.size()), delta, stream)};
}

Coreset gs_halve(const PointSet& points, const KernelSpec& kernel, RandomStream& stream,
                 GsImpl impl) {
  const KernelOracle oracle(kernel, points);
  return {gs_halve(oracle, iota_indices(points.size()), stream, impl)};
}

Coreset gs_thin(const PointSet& points, const KernelSpec& kernel, std::size_t n_out,
                RandomStream& stream, GsImpl impl) {
  const KernelOracle oracle(kernel, points);
  return {gs_thin(oracle, iota_indices(points.size()), n_out, stream, impl)};
}

Coreset gs_compress(const PointSet& points, const KernelSpec& kernel, unsigned g,
                    RandomStream& stream) {
  const KernelOracle oracle(kernel, points);
  return {gs_compress(oracle, iota_indices(points.size()), g, stream)};
}

std::size_t thin_output_size(std::size_t n_in, const ThinConfig& config) {
  config.validate();
  switch (config.algorithm) {
    case Algorithm::kh:
      if (n_in < 2 || n_in % 2 != 0) throw std::invalid_argument("kh: input size must be even");
      if (config.n_out && *config.n_out != n_in / 2) {
        throw std::invalid_argument("kh halves its input; use rkh for smaller n_out");
      }
      return n_in / 2;
    case Algorithm::uniform:
      if (*config.n_out > n_in) throw std::invalid_argument("n_out exceeds input size");
      return *config.n_out;
    case Algorithm::lkh:
    case Algorithm::rkh:
    case Algorithm::gs_thin:
      halving_rounds(n_in, *config.n_out);
      return *config.n_out;
    case Algorithm::kh_compress:
    case Algorithm::kt_compress:
    case Algorithm::gs_compress:
      return compress_size(n_in, *config.g);
  }
  throw std::invalid_argument("unknown algorithm");
}

Coreset thin(const KernelOracle& oracle, const ThinConfig& config) {
  const std::size_t n_out = thin_output_size(oracle.size(), config);
  const IndexList all = iota_indices(oracle.size());
  RandomStream stream(config.seed);
  const double delta = config.delta;
  switch (config.algorithm) {
    case Algorithm::uniform:
      return {thin_uniform(all, n_out, stream)};
    case Algorithm::kh:
      return {kh_halve(oracle, all, delta, stream)};
    case Algorithm::lkh: {
      if (std::holds_alternative<TabulatedKernel>(oracle.spec())) {
        throw std::invalid_argument("lkh needs raw points");
      }
      const unsigned m = halving_rounds(all.size(), n_out);
      IndexList current = all;
      for (unsigned r = 0; r < m; ++r) {
        current = lkh_halve(oracle.points(), current, delta / static_cast<double>(m), stream);
      }
      return {current};
    }
    case Algorithm::rkh:
      return {rkh_thin(oracle, all, delta, n_out, stream)};
    case Algorithm::kh_compress:
      return {kh_compress(oracle, all, delta, *config.g, stream)};
    case Algorithm::kt_compress:
      return {kt_compress(oracle, all, delta, *config.g, stream)};
    case Algorithm::gs_thin:
      return {gs_thin(oracle, all, n_out, stream, GsImpl::cubic)};
    case Algorithm::gs_compress:
      return {gs_compress(oracle, all, *config.g, stream)};
  }
  throw std::invalid_argument("unknown algorithm");
}

Coreset thin(const PointSet& points, const KernelSpec& kernel, const ThinConfig& config,
             WorkCounters* counters) {
  const KernelOracle oracle(kernel, points, counters);
  return thin(oracle, config);
}

}  // namespace lrt
