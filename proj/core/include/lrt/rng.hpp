#pragma once

#include <cstdint>

namespace lrt {

/// Counter-based random stream. Draw k of stream (seed, stream_id) is a pure
/// function of (seed, stream_id, k), so sequences replay bit-exactly on any
/// platform and children can be split off without shared state.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64();
  /// Top 53 bits scaled into [0, 1).
  double uniform01();
  /// Unbiased draw from [0, m) by rejection. Throws std::invalid_argument if m == 0.
  std::uint64_t uniform_index(std::uint64_t m);
  bool bernoulli(double p);

  /// Independent child stream; distinct ids give distinct streams.
  RandomStream split(std::uint64_t child) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace lrt
