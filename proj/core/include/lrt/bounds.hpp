#pragma once

#include <cstddef>
#include <optional>

namespace lrt::bounds {

/// Eigenvalue decay of a Gaussian kernel matrix on n points in a radius-R
/// ball: lambda_{r+1} <= n exp(-(d/2e) r^{1/d} log(d r^{1/d} / (4 e^2 eta R^2))).
/// Empty outside the validity range (2e)^d <= r < n.
std::optional<double> gaussian_eigenvalue_bound(std::size_t n, std::size_t d, double r, double eta,
                                                double R);

struct GaussianKhBound {
  double mmd2 = 0.0;
  double r_star = 0.0;
};
/// Explicit squared-MMD bound for KH(delta) with a Gaussian kernel on a
/// radius-R ball (b = 1/2), valid when n_in >= (2e)^d.
GaussianKhBound gaussian_kh_mmd2_bound(std::size_t n_in, std::size_t n_out, std::size_t d,
                                       double eta, double R, double delta, double delta_prime);

// Sub-Gaussian constants of the thinning algorithms. `k_max` is max_x k(x,x)
// (equivalently ||K||_max for SPSD K).
double nu_uniform(double k_max, std::size_t n_out);
/// KH(delta): b_max sqrt(log(2 n_in / delta)) / n_in.
double nu_kh(std::size_t n_in, double delta, double b_max);
/// LKH(delta): b_max sqrt(log(2 n_in (log(n_in/2) + 1) / delta)) / n_in, b_max = max pair distance.
double nu_lkh(std::size_t n_in, double delta, double b_max);
/// RKH(delta); `c` = min(max sqrt k(x,x), max MMD(delta_x, P_in)).
double nu_rkh(std::size_t n_in, std::size_t n_out, double delta, double c);
double nu_kh_compress(std::size_t n_in, std::size_t n_out, double delta, double k_max);
double nu_gs_thin(double k_max, std::size_t n_out);
double nu_gs_compress(double k_max, std::size_t n_out);

/// Coefficient c of the Thinformer max-error guarantee.
double thinformer_constant(std::size_t d, double R, double v_max);
/// c exp(2R^2/sqrt(d)) ||V||_{2,inf} sqrt(log2(n_out) log(8 n_out log2(n_in/n_out))) / n_out.
double thinformer_error_bound(std::size_t d, double R, double v_max, double v_row_norm,
                              std::size_t n_in, std::size_t n_out);

/// Theta-rank threshold used by LKH-SGD:
/// sqrt(9 e log(4 K n log(e n / 2)) log(4 K n)) max_i ||x_i - x_bar|| / sqrt(n).
double sgd_eps_threshold(std::size_t n, std::size_t epochs, double max_centered_norm);

}  // namespace lrt::bounds
