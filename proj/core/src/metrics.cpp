#include "lrt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace lrt {

namespace {

void check_square(const Matrix& K, Eigen::Index n, const char* what) {
  if (K.rows() != K.cols()) throw std::invalid_argument(std::string(what) + ": K must be square");
  if (K.rows() != n) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

double mmd_squared(const Matrix& K, const Vector& p, const Vector& q) {
  if (p.size() != q.size()) throw std::invalid_argument("mmd: dimension mismatch");
  check_square(K, p.size(), "mmd");
  const Vector w = p - q;
  const double v = w.dot(K * w);
  if (v < 0.0) {
    if (v >= -1e-10) return 0.0;
    throw std::domain_error("mmd: negative quadratic form; kernel matrix is not PSD");
  }
  return v;
}

double mmd(const Matrix& K, const Vector& p, const Vector& q) {
  return std::sqrt(mmd_squared(K, p, q));
}

double kms(const Matrix& K, const Vector& p, const Vector& q, std::span<const std::size_t> queries) {
  if (queries.empty()) throw std::invalid_argument("kms: empty query set");
  if (p.size() != q.size()) throw std::invalid_argument("kms: dimension mismatch");
  check_square(K, p.size(), "kms");
  const Vector w = p - q;
  double best = 0.0;
  for (std::size_t i : queries) {
    if (i >= static_cast<std::size_t>(K.rows())) throw std::out_of_range("kms: query index");
    best = std::max(best, std::abs(K.row(static_cast<Eigen::Index>(i)).dot(w)));
  }
  return best;
}

double uniform_mmd2_expectation(const Matrix& K, std::size_t n_out) {
  const auto n = static_cast<std::size_t>(K.rows());
  check_square(K, K.rows(), "uniform_mmd2_expectation");
  if (n < 2) throw std::invalid_argument("uniform_mmd2_expectation: need n_in >= 2");
  if (n_out < 1 || n_out > n) throw std::invalid_argument("uniform_mmd2_expectation: need 1 <= n_out <= n_in");
  const double nd = static_cast<double>(n);
  const double c_k = K.trace() / nd - K.sum() / (nd * nd);
  return (1.0 / static_cast<double>(n_out)) * (static_cast<double>(n - n_out) / (nd - 1.0)) * c_k;
}

double mmd_to_coreset(const KernelOracle& oracle, std::span<const std::size_t> input,
                      std::span<const std::size_t> coreset) {
  if (input.empty() || coreset.empty()) throw std::invalid_argument("mmd_to_coreset: empty input");
  double in_in = 0.0, in_out = 0.0, out_out = 0.0;
  for (std::size_t a = 0; a < input.size(); ++a) {
    in_in += oracle(input[a], input[a]);
    for (std::size_t b = a + 1; b < input.size(); ++b) in_in += 2.0 * oracle(input[a], input[b]);
    for (std::size_t z : coreset) in_out += oracle(input[a], z);
  }
  for (std::size_t a = 0; a < coreset.size(); ++a) {
    out_out += oracle(coreset[a], coreset[a]);
    for (std::size_t b = a + 1; b < coreset.size(); ++b) {
      out_out += 2.0 * oracle(coreset[a], coreset[b]);
    }
  }
  const double n = static_cast<double>(input.size());
  const double m = static_cast<double>(coreset.size());
  const double v = in_in / (n * n) - 2.0 * in_out / (n * m) + out_out / (m * m);
  return std::sqrt(std::max(0.0, v));
}

Spectrum spectrum(const Matrix& K) {
  if (K.rows() != K.cols()) throw std::invalid_argument("spectrum: K must be square");
  const double scale = std::max(1.0, K.cwiseAbs().maxCoeff());
  if ((K - K.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw std::invalid_argument("spectrum: matrix is not symmetric");
  }
  const Eigen::MatrixXd sym = 0.5 * (K + K.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("spectrum: eigensolver failed");
  Spectrum s;
  const Eigen::VectorXd& ev = solver.eigenvalues();
  s.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), std::greater<>());
  const double lambda1 = s.eigenvalues.empty() ? 0.0 : std::max(0.0, s.eigenvalues.front());
  for (double& v : s.eigenvalues) {
    if (v < 0.0 && v >= -1e-8 * lambda1) v = 0.0;
  }
  return s;
}

std::size_t eps_rank(const Matrix& M, double eps) {
  if (!M.allFinite()) throw std::invalid_argument("eps_rank: non-finite matrix");
  if (M.size() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(M), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double floor = 1e-12 * (sv.size() > 0 ? sv.maxCoeff() : 0.0);
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > eps && sv(i) > floor) ++count;
  }
  return count;
}

double mmd_bound_at(const Spectrum& spec, const BoundInputs& in, std::size_t r, std::size_t n_in,
                    std::size_t n_out) {
  const double e = std::numbers::e;
  const double residual = 1.0 / static_cast<double>(n_out) - 1.0 / static_cast<double>(n_in);
  return in.nu * in.nu * (e * e * static_cast<double>(r) + e * std::log(1.0 / in.delta_prime)) +
         spec.lambda(r + 1) * residual;
}

MmdBound mmd_bound_rhs(const Spectrum& spec, const BoundInputs& in, std::size_t n_in,
                       std::size_t n_out) {
  if (n_out == 0 || n_out > n_in) throw std::invalid_argument("mmd_bound_rhs: need 1 <= n_out <= n_in");
  MmdBound best{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t r = 0; r <= spec.size(); ++r) {
    const double v = mmd_bound_at(spec, in, r, n_in, n_out);
    if (v < best.value) best = {v, r};
  }
  return best;
}

double kms_bound_rhs(const BoundInputs& in, std::size_t I_size, bool lipschitz) {
  if (!lipschitz) {
    if (I_size == 0) throw std::invalid_argument("kms_bound_rhs: empty query set");
    return in.nu * in.D_I * std::sqrt(2.0 * std::log(2.0 * static_cast<double>(I_size) / in.delta_prime));
  }
  if (!(in.L_K > 0.0) || !(in.R_I > 0.0) || in.rank_XI == 0) {
    throw std::invalid_argument("kms_bound_rhs: Lipschitz bound needs L_K, R_I and rank_XI");
  }
  const double e2 = std::numbers::e * std::numbers::e;
  const double rl = in.R_I * in.L_K;
  const double lead = in.nu * in.D_I * std::sqrt(2.0 * std::log(4.0 / in.delta_prime)) *
                      (1.0 + 32.0 / std::sqrt(3.0));
  const double tail = in.nu * in.D_I * 32.0 *
                      std::sqrt((2.0 / 3.0) * static_cast<double>(in.rank_XI) *
                                std::log(3.0 * e2 * rl / std::min(in.D_I * in.D_I, rl)));
  return lead + tail;
}

InflationFactor ctt_inflation_factor(const Spectrum& spec_x, const Spectrum& spec_y, double k_inf,
                                     std::size_t m, std::size_t n, std::size_t s,
                                     std::size_t n_out, double beta_tilde) {
  if (s < 2 || n_out == 0 || n_out > n || m == 0) {
    throw std::invalid_argument("ctt_inflation_factor: invalid sizes");
  }
  if (!(beta_tilde > 0.0)) throw std::invalid_argument("ctt_inflation_factor: beta_tilde must be positive");
  const double log_nb = std::log(static_cast<double>(n) / beta_tilde);
  const double prefactor = std::log(static_cast<double>(m + n) / static_cast<double>(s)) * log_nb;
  InflationFactor out;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r <= 2 * n_out; ++r) {
    const double v = k_inf * static_cast<double>(r) * log_nb +
                     (spec_x.lambda(r + 1) + spec_y.lambda(r + 1)) * static_cast<double>(n_out);
    if (v < best) {
      best = v;
      out.r = r;
    }
  }
  out.r_hat_sq = prefactor * best;
  out.r_hat = std::sqrt(std::max(0.0, out.r_hat_sq));
  return out;
}

}  // namespace lrt
