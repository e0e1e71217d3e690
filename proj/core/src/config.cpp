#include "lrt/config.hpp"

#include <stdexcept>

namespace lrt {

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::uniform: return "uniform";
    case Algorithm::kh: return "kh";
    case Algorithm::lkh: return "lkh";
    case Algorithm::rkh: return "rkh";
    case Algorithm::kh_compress: return "khc";
    case Algorithm::gs_thin: return "gs";
    case Algorithm::gs_compress: return "gsc";
    case Algorithm::kt_compress: return "ktc";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  struct Entry {
    std::string_view short_name, long_name;
    Algorithm value;
  };
  static constexpr Entry kTable[] = {
      {"uniform", "uniform", Algorithm::uniform},
      {"kh", "kh", Algorithm::kh},
      {"lkh", "lkh", Algorithm::lkh},
      {"rkh", "rkh", Algorithm::rkh},
      {"khc", "kh_compress", Algorithm::kh_compress},
      {"gs", "gs_thin", Algorithm::gs_thin},
      {"gsc", "gs_compress", Algorithm::gs_compress},
      {"ktc", "kt_compress", Algorithm::kt_compress},
  };
  for (const auto& e : kTable) {
    if (name == e.short_name || name == e.long_name) return e.value;
  }
  throw std::invalid_argument("unknown algorithm: " + std::string(name));
}

void ThinConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  switch (algorithm) {
    case Algorithm::kh_compress:
    case Algorithm::kt_compress:
    case Algorithm::gs_compress:
      if (!g) throw std::invalid_argument("compress variants need a compression level g");
      break;
    case Algorithm::kh:
      break;
    default:
      if (!n_out) throw std::invalid_argument("algorithm needs n_out");
      if (*n_out == 0) throw std::invalid_argument("n_out must be positive");
  }
}

}  // namespace lrt
