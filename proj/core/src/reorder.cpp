#include "lrt/reorder.hpp"

#include <cmath>
#include <stdexcept>

#include "lrt/bounds.hpp"
#include "lrt/coreset.hpp"
#include "lrt/metrics.hpp"
#include "lrt/point_set.hpp"
#include "lrt/thinning.hpp"

namespace lrt {

IndexList thinned_reorder(std::span<const std::size_t> prior_perm, const std::vector<bool>& selected) {
  const std::size_t n = prior_perm.size();
  if (selected.size() != n) throw std::invalid_argument("thinned_reorder: size mismatch");
  std::vector<bool> seen(n, false);
  for (std::size_t v : prior_perm) {
    if (v >= n || seen[v]) throw std::invalid_argument("thinned_reorder: prior is not a permutation");
    seen[v] = true;
  }
  IndexList front, back;
  front.reserve(n);
  back.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (selected[i]) front.push_back(prior_perm[i]);
  }
  for (std::size_t i = n; i-- > 0;) {
    if (!selected[i]) back.push_back(prior_perm[i]);
  }
  front.insert(front.end(), back.begin(), back.end());
  return front;
}

std::vector<bool> lkh_selection(const Matrix& grads, double delta, RandomStream& stream) {
  const PointSet points(grads);
  const IndexList kept = lkh_halve(points, iota_indices(points.size()), delta, stream);
  std::vector<bool> mask(points.size(), false);
  for (std::size_t i : kept) mask[i] = true;
  return mask;
}

Vector selection_signs(const std::vector<bool>& selected) {
  Vector s(static_cast<Eigen::Index>(selected.size()));
  for (std::size_t i = 0; i < selected.size(); ++i) {
    s(static_cast<Eigen::Index>(i)) = selected[i] ? 1.0 : -1.0;
  }
  return s;
}

double prefix_discrepancy(const Matrix& grads, const Vector& signs) {
  if (grads.rows() != signs.size()) throw std::invalid_argument("prefix_discrepancy: length mismatch");
  Vector acc = Vector::Zero(grads.cols());
  double best = 0.0;
  for (Eigen::Index i = 0; i < grads.rows(); ++i) {
    acc += signs(i) * grads.row(i).transpose();
    best = std::max(best, acc.norm());
  }
  return best;
}

void SgdProblem::validate() const {
  if (features.rows() == 0 || features.cols() == 0) throw std::invalid_argument("sgd: empty data");
  if (targets.size() != features.rows()) throw std::invalid_argument("sgd: target length mismatch");
  if (!(step_size >= 0.0) || !std::isfinite(step_size)) throw std::invalid_argument("sgd: invalid step size");
  if (epochs < 1) throw std::invalid_argument("sgd: need at least one epoch");
  if (batch_size < 1 || features.rows() % static_cast<Eigen::Index>(batch_size) != 0) {
    throw std::invalid_argument("sgd: batch size must divide n");
  }
  if (!features.allFinite() || !targets.allFinite()) throw std::invalid_argument("sgd: non-finite data");
}

namespace {

double example_loss(const SgdProblem& p, Eigen::Index i, const Vector& w) {
  const double margin = p.features.row(i).dot(w);
  if (p.loss == LossKind::least_squares) {
    const double r = margin - p.targets(i);
    return 0.5 * r * r;
  }
  const double t = -p.targets(i) * margin;
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

void add_example_grad(const SgdProblem& p, Eigen::Index i, const Vector& w, double scale, Vector& g) {
  const double margin = p.features.row(i).dot(w);
  double coef;
  if (p.loss == LossKind::least_squares) {
    coef = margin - p.targets(i);
  } else {
    const double y = p.targets(i);
    coef = -y / (1.0 + std::exp(y * margin));
  }
  g += (scale * coef) * p.features.row(i).transpose();
}

IndexList random_permutation(std::size_t n, RandomStream& stream) {
  return thin_uniform(iota_indices(n), n, stream);
}

}  // namespace

double sgd_loss(const SgdProblem& problem, const Vector& w) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < problem.features.rows(); ++i) total += example_loss(problem, i, w);
  return total / static_cast<double>(problem.features.rows()) + 0.5 * problem.l2 * w.squaredNorm();
}

SgdTrajectory run_sgd(const SgdProblem& problem, Ordering ordering, std::uint64_t seed) {
  problem.validate();
  const auto n = static_cast<std::size_t>(problem.features.rows());
  const auto d = problem.features.cols();
  const std::size_t b = problem.batch_size;
  const std::size_t steps = n / b;
  const RandomStream root(seed);
  RandomStream perm_stream = root.split(1);
  RandomStream thin_stream = root.split(2);
  const double thin_delta = 1.0 / (2.0 * static_cast<double>(problem.epochs));

  SgdTrajectory out;
  Vector w = Vector::Zero(d);
  out.losses.push_back(sgd_loss(problem, w));
  IndexList perm = random_permutation(n, perm_stream);
  Matrix grads(static_cast<Eigen::Index>(steps), d);
  Vector g(d);
  for (std::size_t epoch = 0; epoch < problem.epochs; ++epoch) {
    for (std::size_t t = 0; t < steps; ++t) {
      g = problem.l2 * w;
      for (std::size_t e = 0; e < b; ++e) {
        add_example_grad(problem, static_cast<Eigen::Index>(perm[t * b + e]), w,
                         1.0 / static_cast<double>(b), g);
      }
      grads.row(static_cast<Eigen::Index>(t)) = g.transpose();
      w -= problem.step_size * g;
    }
    const double loss = sgd_loss(problem, w);
    out.losses.push_back(loss);
    if (!std::isfinite(loss) || !w.allFinite()) {
      out.diverged = true;
      break;
    }
    const Vector mean = grads.colwise().mean().transpose();
    double spread = 0.0;
    for (Eigen::Index t = 0; t < grads.rows(); ++t) {
      spread = std::max(spread, (grads.row(t).transpose() - mean).norm());
    }
    const double eps = bounds::sgd_eps_threshold(steps, problem.epochs, spread);
    out.eps_values.push_back(eps);
    out.eps_ranks.push_back(eps_rank(grads, eps));

    if (epoch + 1 == problem.epochs) break;
    if (ordering == Ordering::random_reshuffle) {
      perm = random_permutation(n, perm_stream);
    } else {
      const std::vector<bool> mask = lkh_selection(grads, thin_delta, thin_stream);
      const IndexList order = thinned_reorder(iota_indices(steps), mask);
      IndexList next;
      next.reserve(n);
      for (std::size_t t : order) {
        next.insert(next.end(), perm.begin() + static_cast<std::ptrdiff_t>(t * b),
                    perm.begin() + static_cast<std::ptrdiff_t>((t + 1) * b));
      }
      perm = std::move(next);
    }
  }
  return out;
}

}  // namespace lrt
