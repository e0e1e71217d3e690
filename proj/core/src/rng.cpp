#include "lrt/rng.hpp"

#include <stdexcept>

namespace lrt {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), key_(mix64(seed ^ mix64(stream_id + kGolden))) {}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t x = key_ + (counter_ + 1) * kGolden;
  ++counter_;
  return mix64(x);
}

double RandomStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::uniform_index(std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("uniform_index: m must be positive");
  if (m == 1) {
    // Still consumes one draw so that call sequences stay aligned.
    next_u64();
    return 0;
  }
  // [threshold, 2^64) has a length divisible by m.
  const std::uint64_t threshold = (std::uint64_t{0} - m) % m;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) return x % m;
  }
}

bool RandomStream::bernoulli(double p) { return uniform01() < p; }

RandomStream RandomStream::split(std::uint64_t child) const {
  return RandomStream(seed_, mix64(stream_id_ * kGolden + mix64(child + 1)));
}

}  // namespace lrt
