#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "pfds/core.hpp"
#include "pfds/linalg.hpp"
#include "pfds/problem.hpp"

namespace pfds {

struct SolverSettings {
  int p = 2;           // target dimensionality, 1 <= p < n
  double lambda = 0.0; // penalty weight on the trailing n-p columns
  int itmax = 10000;
  double eps = 1e-10;  // stop when the loss decrease falls below this
};

struct SolveResult {
  Matrix x;  // n x p, leading block of z
  Matrix z;  // n x n, rotated to principal axes
  double lambda = 0.0;
  double stress = 0.0;   // of the final iterate, before rotation
  double penalty = 0.0;  // trailing-column penalty of the final iterate
  int itel = 0;          // update passes taken
  bool converged = false;         // false when itmax stopped the loop
  // Largest per-pass rise of the majorized objective stress + 2*lambda*penalty
  // (see the loop note below); stays at roundoff level when every pass
  // descends, so it certifies monotone majorization.
  double max_step_increase = 0.0;
};

// Rotate a configuration to its principal axes: post-multiply by the right
// singular basis, then flip any column whose largest-magnitude entry is
// negative.
inline Matrix principal_axes(const Matrix& z) {
  Matrix out = z * right_singular_basis(z);
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    Eigen::Index imax = 0;
    out.col(j).cwiseAbs().maxCoeff(&imax);
    if (out(imax, j) < 0.0) out.col(j) = -out.col(j);
  }
  return out;
}

namespace detail {

inline void check_settings(const SolverSettings& s, Eigen::Index n) {
  if (s.p < 1 || s.p >= n) throw std::invalid_argument("solver: p must satisfy 1 <= p < n");
  if (!(s.lambda >= 0.0)) throw std::invalid_argument("solver: lambda must be nonnegative");
  if (s.itmax < 1) throw std::invalid_argument("solver: itmax must be at least 1");
  if (!(s.eps > 0.0)) throw std::invalid_argument("solver: eps must be positive");
}

}  // namespace detail

// Minimize stress plus lambda times the trailing-column penalty by
// majorization. Each pass takes a full-space update and divides the
// trailing n-p columns by (1 + lambda). The start defaults to the
// column-centered identity and is rescaled once so that the fitted
// distances match the dissimilarities in the weighted least-squares sense.
inline SolveResult solve_penalized(const MdsProblem& problem, const SolverSettings& settings,
                                   const std::optional<Matrix>& start = std::nullopt) {
  const Eigen::Index n = problem.dissim.rows();
  detail::check_settings(settings, n);
  require_solvable(problem);

  const Matrix v = build_v(problem);
  const Matrix vinv = v_pseudoinverse(v);

  Matrix zold;
  if (start) {
    if (start->rows() != n || start->cols() != n)
      throw std::invalid_argument("solver: start configuration must be n x n");
    zold = *start;
  } else {
    zold = column_center(Matrix::Identity(n, n));
  }

  Matrix dold = distances(zold);
  const double dnum = (problem.weights.array() * problem.dissim.array() * dold.array()).sum();
  const double dden = (problem.weights.array() * dold.array().square()).sum();
  if (!(dden > 0.0)) throw std::runtime_error("solver: start configuration has all points coincident");
  const double scale = dnum / dden;
  zold *= scale;
  dold *= scale;

  double sold = stress(problem, dold);
  double told = penalty_term(zold, settings.p, v);
  double uold = sold + settings.lambda * told;
  // Two objectives are tracked. Convergence stops on the change of
  // u = stress + lambda*penalty, the combination the iteration counts and
  // reported values are based on. The (1+lambda) shrink, however, exactly
  // minimizes the majorizer of f = stress + 2*lambda*penalty (the stored
  // penalty is the quarter-scaled trailing sum, while the shrink matches the
  // half-scaled one), so f is the quantity guaranteed never to rise between
  // passes; u can tick upward near a breakpoint, which also ends the loop.
  double fold = sold + 2.0 * settings.lambda * told;
  Matrix bold = build_b(problem, dold);

  const double shrink = 1.0 + settings.lambda;
  SolveResult out;
  out.lambda = settings.lambda;
  out.max_step_increase = 0.0;

  int itel = 1;
  Matrix znew, dnew;
  double snew = sold, tnew = told, unew = uold;
  for (;;) {
    znew = guttman_update(zold, bold, vinv);
    znew.rightCols(n - settings.p) /= shrink;
    dnew = distances(znew);
    snew = stress(problem, dnew);
    tnew = penalty_term(znew, settings.p, v);
    unew = snew + settings.lambda * tnew;
    if (!std::isfinite(unew))
      throw std::runtime_error("solver: loss became non-finite at pass " + std::to_string(itel));
    const double fnew = snew + 2.0 * settings.lambda * tnew;
    if (fnew - fold > out.max_step_increase) out.max_step_increase = fnew - fold;
    const bool small_change = (uold - unew) < settings.eps;
    if (small_change || itel == settings.itmax) {
      out.converged = small_change;
      break;
    }
    ++itel;
    zold = znew;
    bold = build_b(problem, dnew);
    sold = snew;
    told = tnew;
    uold = unew;
    fold = fnew;
  }

  out.itel = itel;
  out.stress = snew;
  out.penalty = tnew;
  out.z = principal_axes(znew);
  out.x = out.z.leftCols(settings.p);
  return out;
}

}  // namespace pfds
