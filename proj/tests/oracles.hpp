#pragma once

// Independent evaluation devices for the tests: finite differences,
// explicit-loop reimplementations and random instances. Nothing here
// calls into the code paths it is used to check, beyond the function
// under test itself.

#include <random>

#include "pfds/core.hpp"
#include "pfds/problem.hpp"

namespace oracles {

using pfds::Matrix;
using pfds::Vector;

// Plain-loop stress, written independently of the library reduction.
inline double loop_stress(const pfds::MdsProblem& problem, const Matrix& z) {
  const Eigen::Index n = z.rows();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j) {
      double sq = 0.0;
      for (Eigen::Index k = 0; k < z.cols(); ++k) {
        const double diff = z(i, k) - z(j, k);
        sq += diff * diff;
      }
      const double gap = problem.dissim(i, j) - std::sqrt(sq);
      acc += problem.weights(i, j) * gap * gap;
    }
  return acc / 2.0;
}

// Central finite differences of the stress in every configuration entry.
inline Matrix fd_gradient(const pfds::MdsProblem& problem, const Matrix& z, double h = 1e-6) {
  Matrix g(z.rows(), z.cols());
  Matrix zp = z;
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index k = 0; k < z.cols(); ++k) {
      const double save = zp(i, k);
      zp(i, k) = save + h;
      const double up = loop_stress(problem, zp);
      zp(i, k) = save - h;
      const double down = loop_stress(problem, zp);
      zp(i, k) = save;
      g(i, k) = (up - down) / (2.0 * h);
    }
  return g;
}

// Largest residual of the four Penrose conditions for a candidate
// pseudoinverse, also requiring both products to be symmetric.
inline double penrose_residual(const Matrix& a, const Matrix& plus) {
  const Matrix ap = a * plus;
  const Matrix pa = plus * a;
  double worst = (a * pa - a).cwiseAbs().maxCoeff();
  worst = std::max(worst, (plus * ap - plus).cwiseAbs().maxCoeff());
  worst = std::max(worst, (ap - ap.transpose()).cwiseAbs().maxCoeff());
  worst = std::max(worst, (pa - pa.transpose()).cwiseAbs().maxCoeff());
  return worst;
}

// Random symmetric hollow dissimilarities in (0.5, 1.5); weights all one
// or, when asked, random in (0.5, 2).
inline pfds::MdsProblem random_problem(int n, unsigned seed, bool random_weights = false) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ddist(0.5, 1.5);
  std::uniform_real_distribution<double> wdist(0.5, 2.0);
  Matrix d = Matrix::Zero(n, n);
  Matrix w = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      d(i, j) = d(j, i) = ddist(rng);
      w(i, j) = w(j, i) = random_weights ? wdist(rng) : 1.0;
    }
  return pfds::make_problem(std::move(d), std::move(w));
}

inline Matrix random_configuration(int n, int k, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix z(n, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) z(i, j) = gauss(rng);
  return z;
}

}  // namespace oracles
