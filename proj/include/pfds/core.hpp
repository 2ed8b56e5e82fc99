#pragma once

#include <cmath>
#include <stdexcept>

#include "pfds/linalg.hpp"
#include "pfds/problem.hpp"

namespace pfds {

// Weighted Laplacian of the weight matrix: off-diagonal -w_ij, diagonal
// chosen so every row sums to zero.
inline Matrix build_v(const MdsProblem& problem) {
  Matrix v = -problem.weights;
  v.diagonal().setZero();
  v.diagonal() = -v.rowwise().sum();
  return v;
}

// Moore-Penrose inverse of the Laplacian, using the rank-completion trick
// inv(V + ee'/n) - ee'/n. Fails if the weight graph is disconnected.
inline Matrix v_pseudoinverse(const Matrix& v) {
  const Eigen::Index n = v.rows();
  if (n != v.cols()) throw std::invalid_argument("v_pseudoinverse: matrix not square");
  const double shift = 1.0 / static_cast<double>(n);
  Matrix m = v + Matrix::Constant(n, n, shift);
  Eigen::FullPivLU<Matrix> lu(m);
  if (!lu.isInvertible())
    throw std::invalid_argument("v_pseudoinverse: singular system (weight graph disconnected)");
  return lu.inverse() - Matrix::Constant(n, n, shift);
}

// Euclidean distance matrix of the row points of z.
inline Matrix distances(const Matrix& z) {
  const Eigen::Index n = z.rows();
  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j) {
      const double dij = (z.row(i) - z.row(j)).norm();
      d(i, j) = dij;
      d(j, i) = dij;
    }
  return d;
}

// Raw loss: (1/4) * sum over the full matrix of w * (delta - d)^2,
// i.e. half the sum over unordered pairs.
inline double stress(const MdsProblem& problem, const Matrix& dist) {
  return (problem.weights.array() * (problem.dissim - dist).array().square()).sum() / 4.0;
}

inline double stress_at(const MdsProblem& problem, const Matrix& z) {
  return stress(problem, distances(z));
}

// Penalty on the trailing n-p columns y of z: (1/4) * tr y' V y.
inline double penalty_term(const Matrix& z, int p, const Matrix& v) {
  const Eigen::Index n = z.rows();
  if (p < 0 || p > n) throw std::invalid_argument("penalty_term: p out of range");
  if (p == n) return 0.0;
  const Matrix y = z.rightCols(n - p);
  return (y.transpose() * v * y).trace() / 4.0;
}

inline double penalized_stress(const MdsProblem& problem, const Matrix& z, int p, double lambda,
                               const Matrix& v) {
  return stress_at(problem, z) + lambda * penalty_term(z, p, v);
}

// Majorization coefficient matrix: off-diagonal -w_ij * delta_ij / d_ij
// (zero where d_ij is zero), diagonal completing zero row sums.
inline Matrix build_b(const MdsProblem& problem, const Matrix& dist) {
  const Eigen::Index n = dist.rows();
  Matrix b = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j) {
      const double d = dist(i, j);
      if (d > 0.0) {
        const double e = -problem.weights(i, j) * problem.dissim(i, j) / d;
        b(i, j) = e;
        b(j, i) = e;
      }
    }
  b.diagonal() = -b.rowwise().sum();
  return b;
}

// One unconstrained majorization step.
inline Matrix guttman_update(const Matrix& z, const Matrix& b, const Matrix& vinv) {
  return vinv * (b * z);
}

// Gradient of the raw loss with respect to z; in this loss scaling it is
// exactly (V - B(Z)) Z. Undefined at coincident points.
inline Matrix gradient(const MdsProblem& problem, const Matrix& z) {
  const Matrix d = distances(z);
  const Eigen::Index n = d.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if (d(i, j) == 0.0)
        throw std::domain_error("gradient: coincident points " + std::to_string(j + 1) + " and " +
                                std::to_string(i + 1));
  const Matrix v = build_v(problem);
  const Matrix b = build_b(problem, d);
  return (v - b) * z;
}

}  // namespace pfds
