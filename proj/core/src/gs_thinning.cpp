#include <stdexcept>

#include "lrt/thinning.hpp"

namespace lrt {

IndexList gs_halve(const KernelOracle& oracle, std::span<const std::size_t> input,
                   RandomStream& stream, GsImpl impl, const GsWalkOptions& options,
                   const GsObserver& observer) {
  if (input.size() < 2 || input.size() % 2 != 0) {
    throw std::invalid_argument("gs_halve: input size must be even and at least 2");
  }
  const Matrix Q = paired_difference_matrix(oracle, input);
  const GsWalkResult walk = kernel_gs_walk(Q, stream, impl, options, oracle.counters(), observer);
  IndexList out(input.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = walk.z(static_cast<Eigen::Index>(i)) > 0.0 ? input[2 * i] : input[2 * i + 1];
  }
  return out;
}

IndexList gs_thin(const KernelOracle& oracle, std::span<const std::size_t> input, std::size_t n_out,
                  RandomStream& stream, GsImpl impl) {
  const unsigned m = halving_rounds(input.size(), n_out);
  IndexList current(input.begin(), input.end());
  for (unsigned r = 0; r < m; ++r) current = gs_halve(oracle, current, stream, impl);
  return current;
}

}  // namespace lrt
