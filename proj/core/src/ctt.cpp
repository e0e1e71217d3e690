#include "lrt/ctt.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lrt/parallel.hpp"
#include "lrt/thinning.hpp"

namespace lrt {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t elapsed_ns(Clock::time_point start) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count());
}

// MMD between the average of the coresets labeled `in_x` and the average of
// the rest, from the block-sum matrix S (S_ab = sum of k over coreset a x b).
double labeled_mmd(const Eigen::MatrixXd& S, const std::vector<char>& in_x, double count_x,
                   double count_y) {
  double xx = 0.0, xy = 0.0, yy = 0.0;
  const Eigen::Index s = S.rows();
  for (Eigen::Index a = 0; a < s; ++a) {
    for (Eigen::Index b = 0; b < s; ++b) {
      const bool ax = in_x[static_cast<std::size_t>(a)] != 0;
      const bool bx = in_x[static_cast<std::size_t>(b)] != 0;
      if (ax && bx) xx += S(a, b);
      else if (!ax && !bx) yy += S(a, b);
      else xy += S(a, b);
    }
  }
  const double v = xx / (count_x * count_x) - xy / (count_x * count_y) + yy / (count_y * count_y);
  return std::sqrt(std::max(0.0, v));
}

}  // namespace

CttLayout ctt_layout(std::size_t m, std::size_t n, std::size_t s, unsigned g) {
  if (m == 0 || n == 0) throw std::invalid_argument("ctt: empty sample");
  if (s < 2) throw std::invalid_argument("ctt: need at least two coresets");
  const std::size_t total = m + n;
  if ((s * m) % total != 0 || (s * n) % total != 0) {
    throw std::invalid_argument("ctt: s m / (m+n) and s n / (m+n) must be integers");
  }
  CttLayout layout;
  layout.s_m = s * m / total;
  layout.s_n = s * n / total;
  if (layout.s_m == 0 || layout.s_n == 0) throw std::invalid_argument("ctt: each sample needs a bin");
  layout.bin_size = total / s;
  if (layout.bin_size * s != total) throw std::invalid_argument("ctt: bins must have equal size");
  validate_compress_size(layout.bin_size, g);
  layout.n_out = (std::size_t{1} << g) * (std::size_t{1} << log4_exact(layout.bin_size));
  return layout;
}

RankDecision randomized_rank_decision(std::span<const double> permuted, double statistic,
                                      double alpha, RandomStream& stream) {
  std::size_t below = 0, ties = 0;
  for (double v : permuted) {
    if (v < statistic) ++below;
    else if (v == statistic) ++ties;
  }
  RankDecision d;
  d.rank = 1 + below + static_cast<std::size_t>(stream.uniform_index(ties + 1));
  const double B1 = static_cast<double>(permuted.size() + 1);
  d.reject_prob = std::min(1.0, std::max(0.0, static_cast<double>(d.rank) - (1.0 - alpha) * B1));
  d.rejected = stream.bernoulli(d.reject_prob);
  return d;
}

double coreset_mmd(const std::vector<IndexList>& coresets_x, const std::vector<IndexList>& coresets_y,
                   const KernelOracle& k) {
  if (coresets_x.empty() || coresets_y.empty()) throw std::invalid_argument("coreset_mmd: empty list");
  std::vector<std::size_t> idx;
  std::vector<double> w;
  auto add = [&](const std::vector<IndexList>& list, double sign) {
    for (const IndexList& c : list) {
      if (c.empty()) throw std::invalid_argument("coreset_mmd: empty coreset");
      const double weight = sign / (static_cast<double>(list.size()) * static_cast<double>(c.size()));
      for (std::size_t i : c) {
        idx.push_back(i);
        w.push_back(weight);
      }
    }
  };
  add(coresets_x, 1.0);
  add(coresets_y, -1.0);
  double v = 0.0;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    v += w[a] * w[a] * k(idx[a], idx[a]);
    for (std::size_t b = a + 1; b < idx.size(); ++b) v += 2.0 * w[a] * w[b] * k(idx[a], idx[b]);
  }
  return std::sqrt(std::max(0.0, v));
}

TestOutcome ctt_test(const PointSet& X, const PointSet& Y, const KernelSpec& kernel,
                     const CttConfig& config, WorkCounters* counters) {
  const auto start = Clock::now();
  if (X.dim() != Y.dim()) throw std::invalid_argument("ctt: samples differ in dimension");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw std::invalid_argument("ctt: alpha must lie in (0,1)");
  if (!(config.delta > 0.0 && config.delta < 1.0)) throw std::invalid_argument("ctt: delta must lie in (0,1)");
  const std::size_t m = X.size(), n = Y.size();
  const CttLayout layout = ctt_layout(m, n, config.s, config.g);
  const RandomStream root(config.seed);

  IndexList order_x = iota_indices(m);
  IndexList order_y = iota_indices(n);
  if (config.shuffle) {
    RandomStream sx = root.split(101), sy = root.split(102);
    order_x = thin_uniform(order_x, m, sx);
    order_y = thin_uniform(order_y, n, sy);
  }
  for (std::size_t& i : order_y) i += m;

  const KernelOracle base(kernel, vconcat(X, Y));
  const std::size_t s = config.s;
  std::vector<IndexList> coresets(s);
  std::vector<WorkCounters> bin_counters(s);
  parallel_for(s, [&](std::size_t b) {
    KernelOracle oracle = base;
    oracle.set_counters(&bin_counters[b]);
    const bool is_x = b < layout.s_m;
    const IndexList& order = is_x ? order_x : order_y;
    const std::size_t offset = (is_x ? b : b - layout.s_m) * layout.bin_size;
    const std::span<const std::size_t> bin(order.data() + offset, layout.bin_size);
    RandomStream stream = root.split(1000 + b);
    coresets[b] = kt_compress(oracle, bin, config.delta, config.g, stream);
  });

  KernelOracle oracle = base;
  WorkCounters local;
  oracle.set_counters(&local);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = a; b < s; ++b) {
      double sum = 0.0;
      for (std::size_t i : coresets[a]) {
        for (std::size_t j : coresets[b]) sum += oracle(i, j);
      }
      S(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = sum;
      S(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = sum;
    }
  }
  const double size_x = static_cast<double>(layout.s_m * layout.n_out);
  const double size_y = static_cast<double>(layout.s_n * layout.n_out);

  std::vector<char> labels(s, 0);
  for (std::size_t b = 0; b < layout.s_m; ++b) labels[b] = 1;
  TestOutcome out;
  out.statistic = labeled_mmd(S, labels, size_x, size_y);

  RandomStream perm_stream = root.split(2);
  const IndexList all = iota_indices(s);
  out.permuted.reserve(config.B);
  for (std::size_t r = 0; r < config.B; ++r) {
    const IndexList perm = thin_uniform(all, s, perm_stream);
    std::fill(labels.begin(), labels.end(), 0);
    for (std::size_t b = 0; b < layout.s_m; ++b) labels[perm[b]] = 1;
    out.permuted.push_back(labeled_mmd(S, labels, size_x, size_y));
  }
  RandomStream decide = root.split(3);
  const RankDecision d = randomized_rank_decision(out.permuted, out.statistic, config.alpha, decide);
  out.rank = d.rank;
  out.reject_prob = d.reject_prob;
  out.rejected = d.rejected;
  if (counters != nullptr) {
    for (const auto& c : bin_counters) {
      counters->kernel_evals += c.kernel_evals;
      counters->flops += c.flops;
    }
    counters->kernel_evals += local.kernel_evals;
    counters->flops += static_cast<std::uint64_t>(config.B) * s * s;
  }
  out.runtime_ns = elapsed_ns(start);
  return out;
}

TestOutcome subsample_mmd_test(const PointSet& X, const PointSet& Y, const KernelSpec& kernel,
                               std::size_t n_sub, std::size_t B, double alpha, std::uint64_t seed,
                               WorkCounters* counters) {
  const auto start = Clock::now();
  if (X.dim() != Y.dim()) throw std::invalid_argument("subsample test: samples differ in dimension");
  if (n_sub < 1 || n_sub > X.size() || n_sub > Y.size()) {
    throw std::invalid_argument("subsample test: need 1 <= n_sub <= min(m, n)");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("subsample test: alpha must lie in (0,1)");
  const RandomStream root(seed);
  RandomStream sx = root.split(1), sy = root.split(2);
  const IndexList ix = thin_uniform(iota_indices(X.size()), n_sub, sx);
  const IndexList iy = thin_uniform(iota_indices(Y.size()), n_sub, sy);
  const PointSet Z = vconcat(X.subset(ix), Y.subset(iy));
  const std::size_t N = 2 * n_sub;

  const KernelOracle oracle(kernel, Z, counters);
  Eigen::MatrixXd K(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  for (std::size_t a = 0; a < N; ++a) {
    for (std::size_t b = a; b < N; ++b) {
      const double v = oracle(a, b);
      K(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
      K(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
    }
  }
  const double w = 1.0 / static_cast<double>(n_sub);
  Eigen::VectorXd a(static_cast<Eigen::Index>(N));
  auto statistic = [&](const Eigen::VectorXd& weights) {
    return std::sqrt(std::max(0.0, weights.dot(K * weights)));
  };
  for (std::size_t i = 0; i < N; ++i) a(static_cast<Eigen::Index>(i)) = i < n_sub ? w : -w;
  TestOutcome out;
  out.statistic = statistic(a);
  RandomStream perm_stream = root.split(3);
  const IndexList all = iota_indices(N);
  out.permuted.reserve(B);
  for (std::size_t r = 0; r < B; ++r) {
    const IndexList perm = thin_uniform(all, N, perm_stream);
    for (std::size_t i = 0; i < N; ++i) a(static_cast<Eigen::Index>(perm[i])) = i < n_sub ? w : -w;
    out.permuted.push_back(statistic(a));
  }
  RandomStream decide = root.split(4);
  const RankDecision d = randomized_rank_decision(out.permuted, out.statistic, alpha, decide);
  out.rank = d.rank;
  out.reject_prob = d.reject_prob;
  out.rejected = d.rejected;
  if (counters != nullptr) counters->flops += static_cast<std::uint64_t>(B) * 2 * N * N;
  out.runtime_ns = elapsed_ns(start);
  return out;
}

double ctt_default_delta(double alpha, double beta, std::size_t B, std::size_t s) {
  const double bt = beta / (1.0 + beta / 2.0);
  const auto k = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(B + 1)));
  if (k == 0) throw std::invalid_argument("ctt_default_delta: need floor(alpha (B+1)) >= 1");
  return std::min(bt / 6.0, std::pow(bt / 2.0, 1.0 / static_cast<double>(k)) * alpha /
                                (30.0 * std::numbers::e * static_cast<double>(s)));
}

}  // namespace lrt
