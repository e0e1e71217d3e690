#include "lrt/attention.hpp"

#include <cmath>
#include <stdexcept>

#include "lrt/kernels.hpp"
#include "lrt/thinning.hpp"

namespace lrt {

void AttentionProblem::validate() const {
  if (Q.rows() == 0 || K.rows() == 0 || Q.cols() == 0 || V.cols() == 0) {
    throw std::invalid_argument("attention: empty input");
  }
  if (Q.cols() != K.cols()) throw std::invalid_argument("attention: query/key dimension mismatch");
  if (K.rows() != V.rows()) throw std::invalid_argument("attention: key/value count mismatch");
  if (!Q.allFinite() || !K.allFinite() || !V.allFinite()) {
    throw std::invalid_argument("attention: non-finite input");
  }
}

Matrix exact_attention(const AttentionProblem& problem, std::span<const std::size_t> subset) {
  problem.validate();
  if (subset.empty()) throw std::invalid_argument("exact_attention: empty subset");
  const auto s = static_cast<Eigen::Index>(subset.size());
  Matrix Ks(s, problem.K.cols());
  Matrix Vs(s, problem.V.cols());
  for (Eigen::Index j = 0; j < s; ++j) {
    const auto src = static_cast<Eigen::Index>(subset[static_cast<std::size_t>(j)]);
    if (src >= problem.K.rows()) throw std::out_of_range("exact_attention: subset index");
    Ks.row(j) = problem.K.row(src);
    Vs.row(j) = problem.V.row(src);
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(problem.key_dim()));
  Matrix logits = (problem.Q * Ks.transpose()) * scale;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    auto row = logits.row(i);
    row.array() = (row.array() - row.maxCoeff()).exp();
    row /= row.sum();
  }
  return logits * Vs;
}

Matrix exact_attention(const AttentionProblem& problem) {
  return exact_attention(problem, iota_indices(problem.size()));
}

Matrix attention_augmented_points(const AttentionProblem& problem) {
  problem.validate();
  const Eigen::Index n = problem.K.rows();
  const Eigen::Index d = problem.K.cols();
  const Eigen::Index dv = problem.V.cols();
  const double v_max = problem.V.cwiseAbs().maxCoeff();
  Matrix aug(n, d + dv + 1);
  aug.leftCols(d) = problem.K / std::pow(static_cast<double>(d), 0.25);
  aug.middleCols(d, dv) = problem.V;
  aug.col(d + dv).setConstant(v_max);
  return aug;
}

AttentionApproxResult thinformer(const AttentionProblem& problem, unsigned g, RandomStream& stream,
                                 WorkCounters* counters, bool compute_error) {
  problem.validate();
  validate_compress_size(problem.size(), g);
  const KernelOracle oracle(AttentionKernel{problem.key_dim()},
                            PointSet(attention_augmented_points(problem)), counters);
  AttentionApproxResult out;
  out.selected.indices = kh_compress(oracle, iota_indices(problem.size()), 0.5, g, stream);
  out.T_hat = exact_attention(problem, out.selected.indices);
  if (compute_error) out.max_err = attention_max_err(out.T_hat, exact_attention(problem));
  return out;
}

AttentionApproxResult uniform_attention(const AttentionProblem& problem, std::size_t n_out,
                                        RandomStream& stream, bool compute_error) {
  problem.validate();
  AttentionApproxResult out;
  out.selected.indices = thin_uniform(iota_indices(problem.size()), n_out, stream);
  out.T_hat = exact_attention(problem, out.selected.indices);
  if (compute_error) out.max_err = attention_max_err(out.T_hat, exact_attention(problem));
  return out;
}

double attention_max_err(const Matrix& T_hat, const Matrix& T) {
  if (T_hat.rows() != T.rows() || T_hat.cols() != T.cols()) {
    throw std::invalid_argument("attention_max_err: shape mismatch");
  }
  if (T.size() == 0) return 0.0;
  return (T_hat - T).cwiseAbs().maxCoeff();
}

}  // namespace lrt
