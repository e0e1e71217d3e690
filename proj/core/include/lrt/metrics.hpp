#pragma once

#include <span>
#include <vector>

#include "lrt/kernels.hpp"
#include "lrt/types.hpp"

namespace lrt {

/// MMD_K(p, q) = sqrt((p - q)^T K (p - q)). Quadratic forms in [-1e-10, 0)
/// clamp to 0; anything more negative throws std::domain_error (K not PSD).
double mmd(const Matrix& K, const Vector& p, const Vector& q);
double mmd_squared(const Matrix& K, const Vector& p, const Vector& q);

/// Kernel max seminorm max_{i in queries} |e_i^T K (p - q)|.
double kms(const Matrix& K, const Vector& p, const Vector& q, std::span<const std::size_t> queries);

/// Expected squared MMD of uniform subsampling without replacement of n_out
/// of the n = K.rows() input points:
///   (1/n_out) (n - n_out)/(n - 1) * (sum_i K_ii / n - 1^T K 1 / n^2).
double uniform_mmd2_expectation(const Matrix& K, std::size_t n_out);

/// MMD between the uniform distribution on `input` and the multiset `coreset`
/// (both index lists into the oracle's points), from kernel sums.
double mmd_to_coreset(const KernelOracle& oracle, std::span<const std::size_t> input,
                      std::span<const std::size_t> coreset);

/// Descending eigenvalues of a symmetric matrix; lambda(j) is 1-based with
/// lambda(n + 1) = 0.
struct Spectrum {
  std::vector<double> eigenvalues;

  double lambda(std::size_t j) const {
    return (j >= 1 && j <= eigenvalues.size()) ? eigenvalues[j - 1] : 0.0;
  }
  std::size_t size() const { return eigenvalues.size(); }
};

/// Throws std::invalid_argument if K is asymmetric beyond 1e-8 (relative to
/// max |K_ij|). Eigenvalues above -1e-8 * lambda_1 are floored to 0; more
/// negative ones are kept.
Spectrum spectrum(const Matrix& K);

/// Number of singular values strictly greater than eps. Singular values below
/// 1e-12 * sigma_max are treated as zero.
std::size_t eps_rank(const Matrix& M, double eps);

/// Inputs to the low-rank quality bounds.
struct BoundInputs {
  double nu = 0.0;           ///< sub-Gaussian parameter
  double delta_prime = 0.5;  ///< bound failure probability
  double D_I = 1.0;          ///< max_{i in I} sqrt(K_ii)
  double L_K = 0.0;          ///< kernel Lipschitz constant (Lipschitz variant)
  double R_I = 0.0;          ///< max query norm (Lipschitz variant)
  std::size_t rank_XI = 0;   ///< rank of the query matrix (Lipschitz variant)
};

/// Squared-MMD bound nu^2 [e^2 r + e log(1/delta')] + lambda_{r+1} (1/n_out - 1/n_in).
double mmd_bound_at(const Spectrum& spec, const BoundInputs& in, std::size_t r, std::size_t n_in,
                    std::size_t n_out);

struct MmdBound {
  double value = 0.0;  ///< squared-MMD bound
  std::size_t r = 0;   ///< minimizing approximate rank
};
/// Minimum of mmd_bound_at over r = 0..n (n = spec.size()).
MmdBound mmd_bound_rhs(const Spectrum& spec, const BoundInputs& in, std::size_t n_in,
                       std::size_t n_out);

/// KMS bound. Without the Lipschitz refinement:
///   nu D_I sqrt(2 log(2 |I| / delta')).
/// With it:
///   nu D_I sqrt(2 log(4/delta')) (1 + 32/sqrt(3))
///   + nu D_I 32 sqrt((2/3) rank(X_I) log(3 e^2 R_I L_K / min(D_I^2, R_I L_K))).
/// Throws std::invalid_argument if the Lipschitz inputs are missing.
double kms_bound_rhs(const BoundInputs& in, std::size_t I_size, bool lipschitz);

struct InflationFactor {
  double r_hat = 0.0;     ///< square root of r_hat_sq
  double r_hat_sq = 0.0;
  std::size_t r = 0;      ///< minimizing r
};

/// Error inflation factor of Compress Then Test:
///   R^2 = log((m+n)/s) log(n/beta~) min_{r <= 2 n_out} { k_inf r log(n/beta~)
///         + (lambda_{r+1}(K) + lambda_{r+1}(K')) n_out }.
InflationFactor ctt_inflation_factor(const Spectrum& spec_x, const Spectrum& spec_y, double k_inf,
                                     std::size_t m, std::size_t n, std::size_t s,
                                     std::size_t n_out, double beta_tilde);

}  // namespace lrt
