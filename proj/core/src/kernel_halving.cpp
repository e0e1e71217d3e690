#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lrt/thinning.hpp"

namespace lrt {

namespace {

void require_even(std::size_t n, const char* what) {
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument(std::string(what) + ": input size must be even and at least 2");
  }
}

void require_delta(double delta, const char* what) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument(std::string(what) + ": delta must lie in (0,1)");
  }
}

// min(1, (1 - alpha/a)_+ / 2) with the conventions b = 0 -> 1/2 and, for a
// zero threshold, the sign of alpha deciding.
double swap_probability(double alpha, double a, double b) {
  if (b == 0.0) return 0.5;
  if (a == 0.0) {
    if (alpha > 0.0) return 0.0;
    if (alpha < 0.0) return 1.0;
    return 0.5;
  }
  return std::min(1.0, 0.5 * std::max(0.0, 1.0 - alpha / a));
}

}  // namespace

IndexList thin_uniform(std::span<const std::size_t> input, std::size_t n_out,
                       RandomStream& stream) {
  if (n_out < 1 || n_out > input.size()) {
    throw std::invalid_argument("thin_uniform: need 1 <= n_out <= n");
  }
  IndexList pool(input.begin(), input.end());
  IndexList out;
  out.reserve(n_out);
  for (std::size_t j = 0; j < n_out; ++j) {
    const std::size_t r = j + static_cast<std::size_t>(stream.uniform_index(pool.size() - j));
    std::swap(pool[j], pool[r]);
    out.push_back(pool[j]);
  }
  return out;
}

IndexList kh_halve(const KernelOracle& k, std::span<const std::size_t> input, double delta,
                   RandomStream& stream, const KhOptions& options, HalvingTrace* trace) {
  require_even(input.size(), "kh_halve");
  require_delta(delta, "kh_halve");
  const std::size_t n_in = input.size();
  const double constant = options.threshold_constant.value_or(
      0.5 + std::log(2.0 * static_cast<double>(n_in) / delta));
  IndexList s1;
  s1.reserve(n_in / 2);
  double b_max = 0.0;
  for (std::size_t i = 0; i < n_in / 2; ++i) {
    std::size_t x = input[2 * i];
    std::size_t xp = input[2 * i + 1];
    const double b2 = k(x, x) + k(xp, xp) - 2.0 * k(x, xp);
    const double b = std::sqrt(std::max(0.0, b2));
    b_max = std::max(b_max, b);
    const double a = b * b_max * constant;

    double alpha = 0.0;
    for (std::size_t j = 0; j < 2 * i; ++j) alpha += k(input[j], x) - k(input[j], xp);
    double s1_sum = 0.0;
    for (std::size_t z : s1) s1_sum += k(z, x) - k(z, xp);
    alpha -= 2.0 * s1_sum;

    int eta = -1;
    if (stream.uniform01() < swap_probability(alpha, a, b)) {
      std::swap(x, xp);
      eta = 1;
    }
    s1.push_back(x);
    if (trace != nullptr) {
      trace->alpha.push_back(alpha);
      trace->threshold.push_back(a);
      trace->eta.push_back(-eta);
    }
  }
  return s1;
}

double lkh_swap_params(double& sigma, double b, double delta) {
  if (b == 0.0) return 0.0;
  const double a = std::max(b * sigma * std::sqrt(2.0 * std::log(2.0 / delta)), b * b);
  const double s2 = sigma * sigma;
  sigma = std::sqrt(s2 + b * b * std::max(0.0, 1.0 + (b * b - 2.0 * a) * s2 / (a * a)));
  return a;
}

IndexList lkh_halve(const PointSet& points, std::span<const std::size_t> input, double delta,
                    RandomStream& stream, HalvingTrace* trace) {
  require_even(input.size(), "lkh_halve");
  require_delta(delta, "lkh_halve");
  const std::size_t n_in = input.size();
  const auto d = static_cast<Eigen::Index>(points.dim());
  const Matrix& X = points.matrix();
  Vector psi = Vector::Zero(d);
  Vector diff(d);
  double sigma = 0.0;
  const double log_term = std::log(static_cast<double>(n_in) / 2.0) + 1.0;
  IndexList s1;
  s1.reserve(n_in / 2);
  for (std::size_t i = 0; i < n_in / 2; ++i) {
    std::size_t x = input[2 * i];
    std::size_t xp = input[2 * i + 1];
    if (x >= points.size() || xp >= points.size()) throw std::out_of_range("lkh_halve: index");
    diff = X.row(static_cast<Eigen::Index>(x)) - X.row(static_cast<Eigen::Index>(xp));
    const double b = diff.norm();
    const double delta_i = delta / (2.0 * static_cast<double>(i + 1) * log_term);
    const double a = lkh_swap_params(sigma, b, delta_i);
    const double alpha = psi.dot(diff);
    int eta = -1;
    if (stream.uniform01() < swap_probability(alpha, a, b)) {
      std::swap(x, xp);
      eta = 1;
    }
    psi += static_cast<double>(eta) * diff;
    s1.push_back(x);
    if (trace != nullptr) {
      trace->alpha.push_back(alpha);
      trace->threshold.push_back(a);
      trace->eta.push_back(-eta);
    }
  }
  return s1;
}

unsigned halving_rounds(std::size_t n_in, std::size_t n_out) {
  if (n_out == 0 || n_out >= n_in) {
    throw std::invalid_argument("n_out must satisfy n_in = n_out * 2^m with m >= 1");
  }
  unsigned m = 0;
  std::size_t size = n_out;
  while (size < n_in) {
    size *= 2;
    ++m;
  }
  if (size != n_in) throw std::invalid_argument("n_out must satisfy n_in = n_out * 2^m with m >= 1");
  return m;
}

IndexList rkh_thin(const KernelOracle& oracle, std::span<const std::size_t> input, double delta,
                   std::size_t n_out, RandomStream& stream) {
  require_delta(delta, "rkh_thin");
  const unsigned m = halving_rounds(input.size(), n_out);
  IndexList current(input.begin(), input.end());
  for (unsigned r = 0; r < m; ++r) {
    current = kh_halve(oracle, current, delta / static_cast<double>(m), stream);
  }
  return current;
}

IndexList refine_greedy(const KernelOracle& k, std::span<const std::size_t> input,
                        IndexList coreset, RefineTrace* trace) {
  const std::size_t n_in = input.size();
  const std::size_t n_out = coreset.size();
  if (n_in == 0 || n_out == 0) throw std::invalid_argument("refine_greedy: empty input");
  std::vector<double> t(n_in, 0.0), s(n_in, 0.0), diag(n_in, 0.0);
  for (std::size_t a = 0; a < n_in; ++a) {
    diag[a] = k(input[a], input[a]);
    t[a] += diag[a];
    for (std::size_t b = a + 1; b < n_in; ++b) {
      const double v = k(input[a], input[b]);
      t[a] += v;
      t[b] += v;
    }
  }
  const double inv_in = 1.0 / static_cast<double>(n_in);
  const double inv_out = 1.0 / static_cast<double>(n_out);
  for (double& v : t) v *= inv_in;
  for (std::size_t a = 0; a < n_in; ++a) {
    for (std::size_t z : coreset) s[a] += k(input[a], z);
  }

  std::vector<double> k_cur(n_in), k_new(n_in);
  for (std::size_t pos = 0; pos < n_out; ++pos) {
    const std::size_t cur = coreset[pos];
    for (std::size_t a = 0; a < n_in; ++a) k_cur[a] = k(input[a], cur);
    // Change in squared MMD, up to a constant, from moving slot `pos` to x_a.
    std::size_t best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n_in; ++a) {
      const double v = 2.0 * inv_out * (s[a] * inv_out - t[a]) +
                       inv_out * inv_out * (diag[a] - 2.0 * k_cur[a]);
      if (v < best_val) {
        best_val = v;
        best = a;
      }
    }
    const std::size_t chosen = input[best];
    if (trace != nullptr) trace->push_back({pos, coreset, chosen});
    if (chosen != cur) {
      for (std::size_t a = 0; a < n_in; ++a) k_new[a] = k(input[a], chosen);
      for (std::size_t a = 0; a < n_in; ++a) s[a] += k_new[a] - k_cur[a];
      coreset[pos] = chosen;
    }
  }
  return coreset;
}

IndexList kh_refine(const KernelOracle& oracle, std::span<const std::size_t> input, double delta,
                    RandomStream& stream, RefineTrace* trace) {
  IndexList initial = kh_halve(oracle, input, delta, stream);
  return refine_greedy(oracle, input, std::move(initial), trace);
}

}  // namespace lrt
