#include "lrt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lrt::bounds {

namespace {
constexpr double kE = std::numbers::e;
}

std::optional<double> gaussian_eigenvalue_bound(std::size_t n, std::size_t d, double r, double eta,
                                                double R) {
  const double dd = static_cast<double>(d);
  if (r < std::pow(2.0 * kE, dd) || r >= static_cast<double>(n)) return std::nullopt;
  const double root = std::pow(r, 1.0 / dd);
  return static_cast<double>(n) *
         std::exp(-(dd / (2.0 * kE)) * root * std::log(dd * root / (4.0 * kE * kE * eta * R * R)));
}

GaussianKhBound gaussian_kh_mmd2_bound(std::size_t n_in, std::size_t n_out, std::size_t d,
                                       double eta, double R, double delta, double delta_prime) {
  const double dd = static_cast<double>(d);
  const double ni = static_cast<double>(n_in);
  const double no = static_cast<double>(n_out);
  const double b = 0.5;
  GaussianKhBound out;
  out.r_star = std::max(std::pow((2.0 * kE / dd) * std::log(ni * no * b), dd),
                        std::pow(4.0 * R * R * eta * kE * kE * kE / dd, dd));
  out.mmd2 = (1.0 / (no * no)) * std::log(4.0 * no / delta) *
                 (kE * kE * out.r_star + kE * std::log(1.0 / delta_prime)) +
             (1.0 / (no * b)) * (1.0 / no - 1.0 / ni);
  return out;
}

double nu_uniform(double k_max, std::size_t n_out) {
  return std::sqrt(k_max) / std::sqrt(static_cast<double>(n_out));
}

double nu_kh(std::size_t n_in, double delta, double b_max) {
  const double n = static_cast<double>(n_in);
  return b_max * std::sqrt(std::log(2.0 * n / delta)) / n;
}

double nu_lkh(std::size_t n_in, double delta, double b_max) {
  const double n = static_cast<double>(n_in);
  return b_max * std::sqrt(std::log(2.0 * n * (std::log(n / 2.0) + 1.0) / delta)) / n;
}

double nu_rkh(std::size_t n_in, std::size_t n_out, double delta, double c) {
  const double no = static_cast<double>(n_out);
  const double m = std::log2(static_cast<double>(n_in) / no);
  return (2.0 / (no * std::sqrt(3.0))) * std::sqrt(std::log(6.0 * no * m / delta)) * c;
}

double nu_kh_compress(std::size_t n_in, std::size_t n_out, double delta, double k_max) {
  const double no = static_cast<double>(n_out);
  const double m = std::log2(static_cast<double>(n_in) / no);
  return (1.0 / no) * std::sqrt(std::log2(no) * std::log(4.0 * no * m / delta)) * std::sqrt(k_max);
}

double nu_gs_thin(double k_max, std::size_t n_out) {
  return (2.0 / std::sqrt(3.0)) * std::sqrt(k_max) / static_cast<double>(n_out);
}

double nu_gs_compress(double k_max, std::size_t n_out) {
  const double no = static_cast<double>(n_out);
  return (1.0 / no) * std::sqrt(std::log2(no) * k_max);
}

double thinformer_constant(std::size_t d, double R, double v_max) {
  const double dd = static_cast<double>(d);
  const double s3 = std::sqrt(3.0);
  return (128.0 / s3) *
             std::sqrt((dd + 1.0) *
                       std::log(3.0 * kE * kE * (R * R / std::sqrt(dd) + 2.0) * v_max)) +
         std::sqrt(std::log(8.0)) * (4.0 + 128.0 / s3);
}

double thinformer_error_bound(std::size_t d, double R, double v_max, double v_row_norm,
                              std::size_t n_in, std::size_t n_out) {
  if (n_out == 0 || n_out >= n_in) throw std::invalid_argument("thinformer_error_bound: need n_out < n_in");
  const double dd = static_cast<double>(d);
  const double no = static_cast<double>(n_out);
  const double m = std::log2(static_cast<double>(n_in) / no);
  return thinformer_constant(d, R, v_max) * std::exp(2.0 * R * R / std::sqrt(dd)) * v_row_norm *
         std::sqrt(std::log2(no) * std::log(8.0 * no * m)) / no;
}

double sgd_eps_threshold(std::size_t n, std::size_t epochs, double max_centered_norm) {
  const double nn = static_cast<double>(n);
  const double kn = 4.0 * static_cast<double>(epochs) * nn;
  return std::sqrt(9.0 * kE * std::log(kn * std::log(kE * nn / 2.0)) * std::log(kn)) *
         max_centered_norm / std::sqrt(nn);
}

}  // namespace lrt::bounds
