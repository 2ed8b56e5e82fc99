#pragma once

#include <Eigen/Dense>
#include <lapacke.h>

#include <stdexcept>

namespace pfds {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Subtract the column mean from every column.
inline Matrix column_center(const Matrix& m) {
  return m.rowwise() - m.colwise().mean();
}

struct EigenPair {
  Vector values;   // descending
  Matrix vectors;  // columns match values
};

// Spectral decomposition of a symmetric matrix, eigenvalues descending.
inline EigenPair symmetric_eigen(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("symmetric_eigen: matrix not square");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("symmetric_eigen: decomposition failed");
  EigenPair out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

struct SvdTriple {
  Vector values;  // descending, length min(rows, cols)
  Matrix u;       // thin
  Matrix v;       // thin
};

// Thin singular value decomposition, singular values descending.
//
// Backed by LAPACK's divide-and-conquer routine. Beyond speed, the choice is
// about reproducibility: configurations that land on (near-)degenerate
// spectra admit many valid singular bases, and downstream consumers that
// rotate onto this basis inherit whichever one the backend picks. Pinning a
// single deterministic backend keeps those rotations, and everything
// iterated from them, identical from run to run.
inline SvdTriple thin_svd(const Matrix& m) {
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  const lapack_int k = std::min(rows, cols);
  if (k == 0) throw std::invalid_argument("thin_svd: empty matrix");
  Matrix a = m;  // dgesdd overwrites its input
  SvdTriple out;
  out.values.resize(k);
  out.u.resize(rows, k);
  Matrix vt(k, cols);
  const lapack_int info =
      LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', rows, cols, a.data(), rows, out.values.data(),
                     out.u.data(), rows, vt.data(), k);
  if (info != 0) throw std::runtime_error("thin_svd: decomposition failed");
  out.v = vt.transpose();
  return out;
}

// Right singular vectors only, as a square k x k basis for an n x k input
// with n >= k (the full and thin right bases coincide in that case).
inline Matrix right_singular_basis(const Matrix& m) {
  if (m.rows() < m.cols())
    throw std::invalid_argument("right_singular_basis: fewer rows than columns");
  return thin_svd(m).v;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace pfds
