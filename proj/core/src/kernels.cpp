#include "lrt/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lrt/parallel.hpp"

namespace lrt {

namespace {

double sq_dist(const double* x, const double* y, std::size_t d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double t = x[i] - y[i];
    s += t * t;
  }
  return s;
}

double dot(const double* x, const double* y, std::size_t d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) s += x[i] * y[i];
  return s;
}

// Unchecked evaluation; every formula is exactly symmetric in (x, y).
double eval_raw(const KernelSpec& spec, const double* x, const double* y, std::size_t d) {
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, GaussianKernel>) {
          return std::exp(-k.eta * sq_dist(x, y, d));
        } else if constexpr (std::is_same_v<K, LinearKernel>) {
          return dot(x, y, d);
        } else if constexpr (std::is_same_v<K, AttentionKernel>) {
          const std::size_t kd = k.key_dim;
          return std::exp(dot(x, y, kd)) * dot(x + kd, y + kd, d - kd);
        } else if constexpr (std::is_same_v<K, DeepKernel>) {
          const std::size_t p = k.input_dim;
          const double q = std::exp(-k.eta_q * sq_dist(x, y, p));
          const double kappa = std::exp(-k.eta_kappa * sq_dist(x + p, y + p, d - p));
          return ((1.0 - k.eps) * kappa + k.eps) * q;
        } else {
          auto i = static_cast<Eigen::Index>(x[0]);
          auto j = static_cast<Eigen::Index>(y[0]);
          if (i > j) std::swap(i, j);
          return (*k.matrix)(i, j);
        }
      },
      spec);
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double t) { return std::isfinite(t); });
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("kernel parameter " + key + ": not a number: " + value);
  }
}

}  // namespace

void validate_kernel(const KernelSpec& spec, std::size_t point_dim) {
  if (point_dim == 0) throw std::invalid_argument("kernel: zero-dimensional points");
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, GaussianKernel>) {
          if (!(k.eta > 0.0) || !std::isfinite(k.eta)) {
            throw std::invalid_argument("gaussian kernel: eta must be positive");
          }
        } else if constexpr (std::is_same_v<K, AttentionKernel>) {
          if (k.key_dim == 0 || k.key_dim >= point_dim) {
            throw std::invalid_argument("attention kernel: need 0 < key_dim < point dimension");
          }
        } else if constexpr (std::is_same_v<K, DeepKernel>) {
          if (!(k.eps > 0.0 && k.eps < 1.0)) {
            throw std::invalid_argument("deep kernel: eps must lie in (0,1)");
          }
          if (!(k.eta_q > 0.0) || !(k.eta_kappa > 0.0)) {
            throw std::invalid_argument("deep kernel: bandwidths must be positive");
          }
          if (k.input_dim == 0 || k.input_dim >= point_dim) {
            throw std::invalid_argument("deep kernel: need 0 < input_dim < point dimension");
          }
        } else if constexpr (std::is_same_v<K, TabulatedKernel>) {
          if (!k.matrix || k.matrix->rows() != k.matrix->cols() || k.matrix->rows() == 0) {
            throw std::invalid_argument("tabulated kernel: need a nonempty square matrix");
          }
          if (point_dim != 1) throw std::invalid_argument("tabulated kernel: points are indices");
        }
      },
      spec);
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("kernel_eval: dimension mismatch");
  if (!all_finite(x) || !all_finite(y)) throw std::invalid_argument("kernel_eval: non-finite input");
  validate_kernel(spec, x.size());
  if (const auto* t = std::get_if<TabulatedKernel>(&spec)) {
    const double n = static_cast<double>(t->matrix->rows());
    for (double v : {x[0], y[0]}) {
      if (v < 0 || v >= n || v != std::floor(v)) {
        throw std::invalid_argument("tabulated kernel: index out of range");
      }
    }
  }
  return eval_raw(spec, x.data(), y.data(), x.size());
}

double deep_kernel_eval(double eps, double eta_q, double eta_kappa, std::span<const double> x,
                        std::span<const double> y, std::span<const double> phi_x,
                        std::span<const double> phi_y) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("deep kernel: eps must lie in (0,1)");
  const double q = kernel_eval(GaussianKernel{eta_q}, x, y);
  const double kappa = kernel_eval(GaussianKernel{eta_kappa}, phi_x, phi_y);
  return ((1.0 - eps) * kappa + eps) * q;
}

Matrix kernel_matrix(const KernelSpec& spec, const PointSet& points) {
  validate_kernel(spec, points.dim());
  const std::size_t n = points.size();
  const std::size_t d = points.dim();
  Matrix K(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  parallel_for(n, [&](std::size_t i) {
    const double* xi = points.row(i).data();
    for (std::size_t j = i; j < n; ++j) {
      K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          eval_raw(spec, xi, points.row(j).data(), d);
    }
  });
  for (Eigen::Index i = 0; i < K.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) K(i, j) = K(j, i);
  }
  return K;
}

Matrix cross_kernel_matrix(const KernelSpec& spec, const PointSet& a, const PointSet& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("cross_kernel_matrix: dimension mismatch");
  validate_kernel(spec, a.dim());
  Matrix K(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
  parallel_for(a.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          eval_raw(spec, a.row(i).data(), b.row(j).data(), a.dim());
    }
  });
  return K;
}

KernelSpec parse_kernel(std::string_view text) {
  const std::string s(text);
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  std::vector<std::pair<std::string, std::string>> params;
  if (colon != std::string::npos) {
    std::stringstream ss(s.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("kernel parameter without '=': " + item);
      params.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
  }
  auto unknown = [&](const std::string& key) {
    throw std::invalid_argument("unknown parameter '" + key + "' for kernel " + kind);
  };
  if (kind == "gaussian") {
    GaussianKernel k;
    for (const auto& [key, v] : params) {
      if (key == "eta") k.eta = parse_double(key, v);
      else unknown(key);
    }
    if (!(k.eta > 0.0)) throw std::invalid_argument("gaussian kernel: eta must be positive");
    return k;
  }
  if (kind == "linear") {
    if (!params.empty()) unknown(params.front().first);
    return LinearKernel{};
  }
  if (kind == "attention") {
    AttentionKernel k;
    for (const auto& [key, v] : params) {
      if (key == "key_dim") k.key_dim = static_cast<std::size_t>(parse_double(key, v));
      else unknown(key);
    }
    return k;
  }
  if (kind == "deep") {
    DeepKernel k;
    for (const auto& [key, v] : params) {
      if (key == "eps") k.eps = parse_double(key, v);
      else if (key == "eta_q") k.eta_q = parse_double(key, v);
      else if (key == "eta_kappa") k.eta_kappa = parse_double(key, v);
      else if (key == "input_dim") k.input_dim = static_cast<std::size_t>(parse_double(key, v));
      else unknown(key);
    }
    if (!(k.eps > 0.0 && k.eps < 1.0)) throw std::invalid_argument("deep kernel: eps must lie in (0,1)");
    return k;
  }
  throw std::invalid_argument("unknown kernel kind: " + kind);
}

std::string describe_kernel(const KernelSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, GaussianKernel>) {
          os << "gaussian:eta=" << k.eta;
        } else if constexpr (std::is_same_v<K, LinearKernel>) {
          os << "linear";
        } else if constexpr (std::is_same_v<K, AttentionKernel>) {
          os << "attention:key_dim=" << k.key_dim;
        } else if constexpr (std::is_same_v<K, DeepKernel>) {
          os << "deep:eps=" << k.eps << ",eta_q=" << k.eta_q << ",eta_kappa=" << k.eta_kappa
             << ",input_dim=" << k.input_dim;
        } else {
          os << "tabulated:n=" << (k.matrix ? k.matrix->rows() : 0);
        }
      },
      spec);
  return os.str();
}

double median_heuristic_eta(const PointSet& points, std::size_t max_points) {
  const std::size_t n = std::min(points.size(), max_points);
  if (n < 2) throw std::invalid_argument("median heuristic: need at least two points");
  std::vector<double> d2;
  d2.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d2.push_back(sq_dist(points.row(i).data(), points.row(j).data(), points.dim()));
    }
  }
  const std::size_t mid = d2.size() / 2;
  std::nth_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(mid), d2.end());
  double med = d2[mid];
  if (d2.size() % 2 == 0) {
    const double lower = *std::max_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(mid));
    med = 0.5 * (med + lower);
  }
  if (!(med > 0.0)) throw std::invalid_argument("median heuristic: median distance is zero");
  return 1.0 / med;
}

KernelOracle::KernelOracle(KernelSpec spec, PointSet points, WorkCounters* counters)
    : spec_(std::move(spec)), points_(std::move(points)), n_(points_.size()), counters_(counters) {
  validate_kernel(spec_, points_.dim());
  if (const auto* t = std::get_if<TabulatedKernel>(&spec_)) {
    const double n = static_cast<double>(t->matrix->rows());
    for (std::size_t i = 0; i < n_; ++i) {
      const double v = points_.row(i)[0];
      if (v < 0 || v >= n || v != std::floor(v)) {
        throw std::invalid_argument("tabulated kernel: index out of range");
      }
    }
  }
}

KernelOracle::KernelOracle(std::shared_ptr<const Matrix> matrix, WorkCounters* counters)
    : spec_(TabulatedKernel{matrix}), counters_(counters) {
  if (!matrix || matrix->rows() != matrix->cols() || matrix->rows() == 0) {
    throw std::invalid_argument("KernelOracle: need a nonempty square matrix");
  }
  n_ = static_cast<std::size_t>(matrix->rows());
  Matrix idx(matrix->rows(), 1);
  for (Eigen::Index i = 0; i < idx.rows(); ++i) idx(i, 0) = static_cast<double>(i);
  points_ = PointSet(std::move(idx));
  dense_ = std::move(matrix);
}

double KernelOracle::compute(std::size_t i, std::size_t j) const {
  return eval_raw(spec_, points_.row(i).data(), points_.row(j).data(), points_.dim());
}

KernelOracle KernelOracle::materialized() const {
  KernelOracle copy = *this;
  if (!dense_) copy.dense_ = std::make_shared<const Matrix>(kernel_matrix(spec_, points_));
  return copy;
}

Matrix KernelOracle::block(std::span<const std::size_t> rows,
                           std::span<const std::size_t> cols) const {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = (*this)(rows[a], cols[b]);
    }
  }
  return out;
}

}  // namespace lrt
