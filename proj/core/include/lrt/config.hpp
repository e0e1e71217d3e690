#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace lrt {

enum class Algorithm { uniform, kh, lkh, rkh, kh_compress, gs_thin, gs_compress, kt_compress };

/// CLI spelling: uniform, kh, lkh, rkh, khc, gs, gsc, ktc.
std::string_view algorithm_name(Algorithm a);
/// Accepts CLI spellings and the long enum names. Throws std::invalid_argument.
Algorithm parse_algorithm(std::string_view name);

struct ThinConfig {
  Algorithm algorithm = Algorithm::kh;
  double delta = 0.5;
  /// Target size for uniform, kh, lkh, rkh and gs_thin.
  std::optional<std::size_t> n_out;
  /// Compression level for the compress variants.
  std::optional<unsigned> g;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument when delta is outside (0,1) or the size
  /// parameter required by the algorithm is missing.
  void validate() const;
};

}  // namespace lrt
