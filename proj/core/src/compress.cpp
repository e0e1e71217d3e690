#include <cmath>
#include <stdexcept>

#include "lrt/thinning.hpp"

namespace lrt {

unsigned log4_exact(std::size_t n) {
  if (n == 0) throw std::invalid_argument("input size must be a power of 4");
  unsigned a = 0;
  std::size_t size = 1;
  while (size < n) {
    size *= 4;
    ++a;
  }
  if (size != n) throw std::invalid_argument("input size must be a power of 4");
  return a;
}

void validate_compress_size(std::size_t n, unsigned g) {
  const unsigned a = log4_exact(n);
  if (g > a) throw std::invalid_argument("compression level g exceeds log4(n_in)");
}

namespace {

struct CompressContext {
  unsigned g;
  std::size_t base;  // 4^g
  double n_in;
  double log4_gap;   // log4(n_in) - g
  double delta;
  const Halver* halve;
  const Halver* final;
};

IndexList compress_node(std::span<const std::size_t> s, RandomStream& stream,
                        const CompressContext& ctx, bool root) {
  if (s.size() == ctx.base) return IndexList(s.begin(), s.end());
  const std::size_t quarter = s.size() / 4;
  IndexList merged;
  merged.reserve(s.size());
  for (std::size_t c = 0; c < 4; ++c) {
    RandomStream child = stream.split(c + 1);
    const IndexList part = compress_node(s.subspan(c * quarter, quarter), child, ctx, false);
    merged.insert(merged.end(), part.begin(), part.end());
  }
  const double ell = static_cast<double>(merged.size());
  const double d = ell * ell / (ctx.n_in * std::ldexp(1.0, 2 * static_cast<int>(ctx.g) + 2) * ctx.log4_gap) *
                   ctx.delta;
  const Halver& h = (root && ctx.final != nullptr && *ctx.final) ? *ctx.final : *ctx.halve;
  return h(merged, d, stream);
}

}  // namespace

IndexList compress(std::span<const std::size_t> input, unsigned g, double delta,
                   RandomStream& stream, const Halver& halve, const Halver& final) {
  validate_compress_size(input.size(), g);
  const unsigned a = log4_exact(input.size());
  CompressContext ctx{g,
                      std::size_t{1} << (2 * g),
                      static_cast<double>(input.size()),
                      static_cast<double>(a - g),
                      delta,
                      &halve,
                      &final};
  return compress_node(input, stream, ctx, true);
}

IndexList kh_compress(const KernelOracle& oracle, std::span<const std::size_t> input, double delta,
                      unsigned g, RandomStream& stream) {
  const Halver halve = [&](std::span<const std::size_t> s, double d, RandomStream& r) {
    return kh_halve(oracle, s, d, r);
  };
  return compress(input, g, delta, stream, halve);
}

IndexList kt_compress(const KernelOracle& oracle, std::span<const std::size_t> input, double delta,
                      unsigned g, RandomStream& stream) {
  const Halver halve = [&](std::span<const std::size_t> s, double d, RandomStream& r) {
    return kh_halve(oracle, s, d, r);
  };
  const Halver refine = [&](std::span<const std::size_t> s, double d, RandomStream& r) {
    return kh_refine(oracle, s, d, r);
  };
  return compress(input, g, delta, stream, halve, refine);
}

IndexList gs_compress(const KernelOracle& oracle, std::span<const std::size_t> input, unsigned g,
                      RandomStream& stream) {
  const Halver halve = [&](std::span<const std::size_t> s, double, RandomStream& r) {
    return gs_halve(oracle, s, r, GsImpl::cubic);
  };
  return compress(input, g, 0.5, stream, halve);
}

}  // namespace lrt
