#include "lrt/gs_walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace lrt {

namespace {

using Dense = Eigen::MatrixXd;

void add_flops(WorkCounters* c, double f) {
  if (c != nullptr) c->flops += static_cast<std::uint64_t>(f);
}

Dense gather(const Dense& Q, const std::vector<std::size_t>& idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Dense M(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      M(a, b) = Q(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(a)]),
                  static_cast<Eigen::Index>(idx[static_cast<std::size_t>(b)]));
    }
  }
  return M;
}

Eigen::VectorXd gather_col(const Dense& Q, const std::vector<std::size_t>& idx, std::size_t col) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a) {
    v(static_cast<Eigen::Index>(a)) =
        Q(static_cast<Eigen::Index>(idx[a]), static_cast<Eigen::Index>(col));
  }
  return v;
}

// Ridge added to Q when it is not safely positive definite.
double choose_ridge(const Dense& Q, const GsWalkOptions& opt) {
  const Eigen::Index m = Q.rows();
  Eigen::LLT<Dense> llt(Q);
  bool ok = llt.info() == Eigen::Success;
  if (ok) {
    const double max_diag = Q.diagonal().maxCoeff();
    const double min_pivot = llt.matrixLLT().diagonal().cwiseAbs2().minCoeff();
    ok = min_pivot >= opt.pivot_tol * max_diag && max_diag > 0.0;
  }
  if (ok) return 0.0;
  const double r = opt.ridge_rel * Q.trace() / static_cast<double>(m);
  return r > 0.0 ? r : 1.0;
}

// Maintains C = (Q_{A2,A2})^{-1}, with `idx` listing A2 in C's order.
class CubicInverse {
 public:
  CubicInverse(const Dense& Q, std::vector<std::size_t> idx) : Q_(Q), idx_(std::move(idx)) {}

  bool initialize(WorkCounters* counters) {
    const Dense M = gather(Q_, idx_);
    const auto k = M.rows();
    if (k == 0) {
      C_.resize(0, 0);
      return true;
    }
    Eigen::LLT<Dense> llt(M);
    if (llt.info() != Eigen::Success) return false;
    C_ = llt.solve(Dense::Identity(k, k));
    add_flops(counters, static_cast<double>(k) * k * k * (1.0 / 3.0 + 2.0));
    return C_.allFinite();
  }

  // Drops coordinate i from A2 via the Sherman-Morrison identity
  // (M)^{-1} = D - D q q^T D / (Q_ii + q^T D q), D = C without i.
  void remove(std::size_t i, WorkCounters* counters) {
    const auto it = std::find(idx_.begin(), idx_.end(), i);
    if (it == idx_.end()) throw std::logic_error("gs walk: coordinate not in inverse");
    const auto pos = static_cast<Eigen::Index>(it - idx_.begin());
    const Eigen::Index last = C_.rows() - 1;
    if (pos != last) {
      C_.row(pos).swap(C_.row(last));
      C_.col(pos).swap(C_.col(last));
      std::swap(idx_[static_cast<std::size_t>(pos)], idx_.back());
    }
    idx_.pop_back();
    const Eigen::Index k = last;
    Dense D = C_.topLeftCorner(k, k);
    if (k > 0) {
      const Eigen::VectorXd q = gather_col(Q_, idx_, i);
      const Eigen::VectorXd Dq = D * q;
      const double qi = Q_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
      D.noalias() -= (Dq * Dq.transpose()) / (qi + q.dot(Dq));
      add_flops(counters, 4.0 * static_cast<double>(k) * k);
    }
    C_ = std::move(D);
  }

  const Dense& C() const { return C_; }
  const std::vector<std::size_t>& idx() const { return idx_; }

 private:
  const Dense& Q_;
  std::vector<std::size_t> idx_;
  Dense C_;
};

}  // namespace

Matrix paired_difference_matrix(const KernelOracle& k, std::span<const std::size_t> input) {
  if (input.size() < 2 || input.size() % 2 != 0) {
    throw std::invalid_argument("paired_difference_matrix: input size must be even");
  }
  const std::size_t m = input.size() / 2;
  Matrix Q(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t ai = input[2 * i], bi = input[2 * i + 1];
    for (std::size_t j = i; j < m; ++j) {
      const std::size_t aj = input[2 * j], bj = input[2 * j + 1];
      const double v = k(ai, aj) + k(bi, bj) - k(ai, bj) - k(bi, aj);
      Q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      Q(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  if (!Q.allFinite()) throw std::invalid_argument("paired_difference_matrix: non-finite kernel value");
  return Q;
}

GsWalkResult kernel_gs_walk(const Matrix& Q_in, RandomStream& stream, GsImpl impl,
                            const GsWalkOptions& opt, WorkCounters* counters,
                            const GsObserver& observer) {
  if (Q_in.rows() != Q_in.cols() || Q_in.rows() == 0) {
    throw std::invalid_argument("kernel_gs_walk: Q must be square and nonempty");
  }
  if (!Q_in.allFinite()) throw std::invalid_argument("kernel_gs_walk: non-finite Q");
  const auto m = static_cast<std::size_t>(Q_in.rows());
  Dense Q = Q_in;
  GsWalkResult result;
  result.ridge = choose_ridge(Q, opt);
  Q.diagonal().array() += result.ridge;
  add_flops(counters, std::pow(static_cast<double>(m), 3) / 3.0);

  Eigen::VectorXd z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  std::vector<bool> frozen(m, false);
  std::vector<std::size_t> active(m);
  for (std::size_t i = 0; i < m; ++i) active[i] = i;
  std::size_t unfrozen = m;

  std::size_t p = active[stream.uniform_index(active.size())];

  GsImpl mode = impl;
  std::optional<CubicInverse> inverse;
  if (mode == GsImpl::cubic) {
    std::vector<std::size_t> a2;
    for (std::size_t i : active) {
      if (i != p) a2.push_back(i);
    }
    inverse.emplace(Q, std::move(a2));
    if (!inverse->initialize(counters)) {
      inverse.reset();
      mode = GsImpl::quartic;
      result.fell_back = true;
    }
  }
  result.impl_used = mode;

  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  std::vector<std::size_t> a2;
  while (unfrozen > 0) {
    // A' = A minus its smallest frozen coordinate.
    const auto f = std::find_if(active.begin(), active.end(), [&](std::size_t i) { return frozen[i]; });
    if (f != active.end()) active.erase(f);
    if (std::find(active.begin(), active.end(), p) == active.end()) {
      p = active[stream.uniform_index(active.size())];
    }
    a2.clear();
    for (std::size_t i : active) {
      if (i != p) a2.push_back(i);
    }

    // u_{A2} = -Q_{A2,A2}^{-1} Q_{A2,p}, u_p = 1, zero elsewhere.
    u.setZero();
    u(static_cast<Eigen::Index>(p)) = 1.0;
    if (mode == GsImpl::cubic) {
      const auto& idx = inverse->idx();
      if (idx.size() != a2.size()) {
        // Exactly one coordinate of the old A2 has left.
        std::size_t gone = m;
        for (std::size_t i : idx) {
          if (!std::binary_search(a2.begin(), a2.end(), i)) {
            gone = i;
            break;
          }
        }
        inverse->remove(gone, counters);
      }
      const auto& order = inverse->idx();
      if (!order.empty()) {
        const Eigen::VectorXd q = gather_col(Q, order, p);
        const Eigen::VectorXd w = -(inverse->C() * q);
        for (std::size_t a = 0; a < order.size(); ++a) {
          u(static_cast<Eigen::Index>(order[a])) = w(static_cast<Eigen::Index>(a));
        }
        add_flops(counters, 2.0 * static_cast<double>(order.size()) * order.size());
      }
      if (opt.validate_inverse && !order.empty()) {
        const Dense M = gather(Q, order);
        const Dense R = inverse->C() * M - Dense::Identity(M.rows(), M.cols());
        if (R.cwiseAbs().maxCoeff() > 1e-6) {
          throw std::logic_error("kernel_gs_walk: maintained inverse lost accuracy");
        }
      }
    } else if (!a2.empty()) {
      const Dense M = gather(Q, a2);
      const Eigen::VectorXd q = gather_col(Q, a2, p);
      Eigen::LLT<Dense> llt(M);
      Eigen::VectorXd w;
      if (llt.info() == Eigen::Success) {
        w = -llt.solve(q);
      } else {
        w = -M.ldlt().solve(q);
      }
      for (std::size_t a = 0; a < a2.size(); ++a) {
        u(static_cast<Eigen::Index>(a2[a])) = w(static_cast<Eigen::Index>(a));
      }
      const double k = static_cast<double>(a2.size());
      add_flops(counters, k * k * k / 3.0 + 2.0 * k * k);
    }

    if (observer) {
      GsIterationView view;
      view.iteration = result.iterations;
      view.pivot = p;
      view.active = mode == GsImpl::cubic ? std::span<const std::size_t>(inverse->idx())
                                          : std::span<const std::size_t>(a2);
      view.inverse = mode == GsImpl::cubic ? &inverse->C() : nullptr;
      view.Q = &Q;
      view.z = &z;
      observer(view);
    }

    // Largest forward and backward steps keeping z in the cube.
    double d_plus = std::numeric_limits<double>::infinity();
    double d_minus = std::numeric_limits<double>::infinity();
    for (std::size_t i : active) {
      const double ui = u(static_cast<Eigen::Index>(i));
      if (ui == 0.0) continue;
      const double zi = z(static_cast<Eigen::Index>(i));
      if (ui > 0.0) {
        d_plus = std::min(d_plus, (1.0 - zi) / ui);
        d_minus = std::min(d_minus, (1.0 + zi) / ui);
      } else {
        d_plus = std::min(d_plus, (-1.0 - zi) / ui);
        d_minus = std::min(d_minus, (zi - 1.0) / ui);
      }
    }
    d_plus = std::max(0.0, d_plus);
    d_minus = std::max(0.0, d_minus);
    const double draw = stream.uniform01();
    double step = 0.0;
    if (d_plus + d_minus > 0.0) step = draw < d_minus / (d_plus + d_minus) ? d_plus : -d_minus;

    if (step != 0.0) {
      for (std::size_t i : active) {
        const auto ii = static_cast<Eigen::Index>(i);
        if (u(ii) == 0.0 || frozen[i]) continue;
        z(ii) = std::clamp(z(ii) + step * u(ii), -1.0, 1.0);
      }
    }
    for (std::size_t i : active) {
      const auto ii = static_cast<Eigen::Index>(i);
      if (!frozen[i] && std::abs(z(ii)) >= 1.0 - opt.freeze_tol) {
        z(ii) = z(ii) > 0.0 ? 1.0 : -1.0;
        frozen[i] = true;
        --unfrozen;
      }
    }
    result.pivots.push_back(p);
    ++result.iterations;
    if (result.iterations > 4 * m + 16) {
      throw std::logic_error("kernel_gs_walk: walk failed to terminate");
    }
  }
  result.z = z;
  return result;
}

}  // namespace lrt
