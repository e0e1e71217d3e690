#pragma once

#include <lrt/rng.hpp>
#include <lrt/types.hpp>

namespace lrt::synth {

/// Standard normal variate by the Box-Muller transform (two uniform draws).
double standard_normal(RandomStream& stream);

/// n x d matrix with i.i.d. U[0,1) entries, row-major draw order.
Matrix uniform_cube(std::size_t n, std::size_t d, RandomStream& stream);

/// n x d matrix with i.i.d. N(0,1) entries, row-major draw order.
Matrix gaussian_matrix(std::size_t n, std::size_t d, RandomStream& stream);

/// Least-squares design with singular values spread log-uniformly over
/// [1/sqrt(condition), 1] times sqrt(n), targets X w* + noise.
struct Regression {
  Matrix features;
  Vector targets;
};
Regression least_squares_problem(std::size_t n, std::size_t d, double condition, double noise,
                                 RandomStream& stream);

/// Labels in {-1, +1} drawn from a logistic model on Gaussian features.
Regression logistic_problem(std::size_t n, std::size_t d, RandomStream& stream);

}  // namespace lrt::synth
