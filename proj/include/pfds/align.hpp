#pragma once

#include <stdexcept>
#include <vector>

#include "pfds/linalg.hpp"
#include "pfds/solver.hpp"

namespace pfds {

// Orthogonal matrix R minimizing ||a R - target|| over the full orthogonal
// group (reflections allowed): R = U W' from the SVD of a' target.
inline Matrix procrustes_rotation(const Matrix& a, const Matrix& target) {
  if (a.rows() != target.rows() || a.cols() != target.cols())
    throw std::invalid_argument("procrustes: shapes do not match");
  const SvdTriple svd = thin_svd(a.transpose() * target);
  return svd.u * svd.v.transpose();
}

struct AlignmentSet {
  std::vector<Matrix> configs;  // rotated copies, principal-axes gauge
  int iterations = 0;           // sweeps taken
  double final_fit = 0.0;       // sum of squared distances to the mean
};

namespace detail {

inline Matrix config_mean(const std::vector<Matrix>& xs) {
  Matrix m = xs.front();
  for (std::size_t j = 1; j < xs.size(); ++j) m += xs[j];
  return m / static_cast<double>(xs.size());
}

inline double spread_around(const std::vector<Matrix>& xs, const Matrix& mean) {
  double fit = 0.0;
  for (const auto& x : xs) fit += (x - mean).squaredNorm();
  return fit;
}

}  // namespace detail

// Rotate a set of same-shape configurations onto each other: sweep over
// the set rotating each onto the current mean, recompute the mean, repeat
// until the spread stops decreasing. The final common gauge is the
// principal-axes rotation of the mean.
inline AlignmentSet match_configurations(const std::vector<Matrix>& configs, int itmax = 100,
                                         double eps = 1e-10) {
  if (configs.size() < 2) throw std::invalid_argument("match: need at least two configurations");
  for (const auto& c : configs)
    if (c.rows() != configs.front().rows() || c.cols() != configs.front().cols())
      throw std::invalid_argument("match: configurations must share one shape");
  if (itmax < 1) throw std::invalid_argument("match: itmax must be at least 1");
  if (!(eps > 0.0)) throw std::invalid_argument("match: eps must be positive");

  AlignmentSet out;
  out.configs = configs;
  Matrix mean = detail::config_mean(out.configs);
  double fold = detail::spread_around(out.configs, mean);
  int itel = 1;
  for (;;) {
    for (auto& x : out.configs) x = x * procrustes_rotation(x, mean);
    mean = detail::config_mean(out.configs);
    const double fnew = detail::spread_around(out.configs, mean);
    if (fold - fnew < eps || itel == itmax) {
      fold = fnew;
      break;
    }
    ++itel;
    fold = fnew;
  }

  // Common rotation to the mean's principal axes; relative fit unchanged.
  Matrix basis = right_singular_basis(mean);
  Matrix rotated_mean = mean * basis;
  for (Eigen::Index j = 0; j < rotated_mean.cols(); ++j) {
    Eigen::Index imax = 0;
    rotated_mean.col(j).cwiseAbs().maxCoeff(&imax);
    if (rotated_mean(imax, j) < 0.0) basis.col(j) = -basis.col(j);
  }
  for (auto& x : out.configs) x = x * basis;

  out.iterations = itel;
  out.final_fit = fold;
  return out;
}

}  // namespace pfds
