#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "lrt/point_set.hpp"
#include "lrt/types.hpp"

namespace lrt {

/// k(x,y) = exp(-eta ||x - y||^2), eta > 0.
struct GaussianKernel {
  double eta = 1.0;
};

/// k(x,y) = <x, y>.
struct LinearKernel {};

/// Key-value attention kernel on augmented points [k~ | v~] where the first
/// `key_dim` coordinates hold the scaled key k / d^(1/4) and the rest hold
/// (v, v_max): k((k~,v~),(k~',v~')) = exp(<k~,k~'>) <v~,v~'>.
struct AttentionKernel {
  std::size_t key_dim = 0;
};

/// Deep kernel on points [x | phi(x)] whose first `input_dim` coordinates are
/// raw inputs and whose remainder is a precomputed embedding:
///   k = [(1 - eps) Gauss(eta_kappa)(phi, phi') + eps] Gauss(eta_q)(x, x').
struct DeepKernel {
  double eps = 0.5;
  double eta_q = 1.0;
  double eta_kappa = 1.0;
  std::size_t input_dim = 0;
};

/// Explicit kernel matrix; a point is a single coordinate holding its index.
struct TabulatedKernel {
  std::shared_ptr<const Matrix> matrix;
};

using KernelSpec =
    std::variant<GaussianKernel, LinearKernel, AttentionKernel, DeepKernel, TabulatedKernel>;

/// Throws std::invalid_argument on dimension mismatch, non-finite input or
/// invalid parameters.
double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

/// Deep kernel from separately supplied embeddings. Throws if eps is not in (0,1).
double deep_kernel_eval(double eps, double eta_q, double eta_kappa, std::span<const double> x,
                        std::span<const double> y, std::span<const double> phi_x,
                        std::span<const double> phi_y);

/// Dense n x n kernel matrix, exactly symmetric (upper triangle mirrored).
Matrix kernel_matrix(const KernelSpec& spec, const PointSet& points);

/// Rows of `a` against rows of `b`.
Matrix cross_kernel_matrix(const KernelSpec& spec, const PointSet& a, const PointSet& b);

/// Parses "gaussian:eta=1.5", "linear", "attention:key_dim=16",
/// "deep:eps=0.1,eta_q=1,eta_kappa=2,input_dim=2".
KernelSpec parse_kernel(std::string_view text);
std::string describe_kernel(const KernelSpec& spec);

/// Median-heuristic bandwidth: eta = 1 / median(||x_i - x_j||^2) over pairs of
/// the first `max_points` rows. A convention offered for convenience only.
double median_heuristic_eta(const PointSet& points, std::size_t max_points = 1000);

/// Validates parameters and the point dimension against the spec.
void validate_kernel(const KernelSpec& spec, std::size_t point_dim);

/// Index-based kernel access over a fixed point set. Every call counts as one
/// kernel evaluation in the attached WorkCounters, whether the value is
/// computed on demand or read from a materialized matrix.
class KernelOracle {
 public:
  KernelOracle(KernelSpec spec, PointSet points, WorkCounters* counters = nullptr);
  /// Oracle reading directly from an explicit kernel matrix.
  explicit KernelOracle(std::shared_ptr<const Matrix> matrix, WorkCounters* counters = nullptr);

  double operator()(std::size_t i, std::size_t j) const {
    if (counters_ != nullptr) ++counters_->kernel_evals;
    if (dense_) return (*dense_)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return compute(i, j);
  }

  std::size_t size() const { return n_; }
  const KernelSpec& spec() const { return spec_; }
  const PointSet& points() const { return points_; }
  WorkCounters* counters() const { return counters_; }
  void set_counters(WorkCounters* counters) { counters_ = counters; }

  /// Copy whose lookups read a precomputed dense matrix. Precomputation is not
  /// counted; later lookups are.
  KernelOracle materialized() const;
  bool is_materialized() const { return dense_ != nullptr; }

  /// Dense matrix restricted to `rows` x `cols` (counted).
  Matrix block(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;

 private:
  double compute(std::size_t i, std::size_t j) const;

  KernelSpec spec_;
  PointSet points_;
  std::shared_ptr<const Matrix> dense_;
  std::size_t n_ = 0;
  WorkCounters* counters_ = nullptr;
};

}  // namespace lrt
