#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pfds/core.hpp"
#include "pfds/linalg.hpp"
#include "pfds/problem.hpp"

namespace pfds {

// Global-optimality certificate for a full-dimensional solution: at a
// global minimum V - B(Z) is positive semidefinite and complementary to
// the configuration (tr ZZ'(V - B(Z)) = 0).
struct Certificate {
  double min_eigenvalue = 0.0;
  double complementarity = 0.0;
  double tol = 0.0;
  bool pass = false;
};

inline Certificate cfds_certificate(const MdsProblem& problem, const Matrix& z,
                                    double tol = 1e-6) {
  if (z.rows() != problem.dissim.rows())
    throw std::invalid_argument("certificate: configuration size does not match problem");
  const Matrix v = build_v(problem);
  const Matrix b = build_b(problem, distances(z));
  const Matrix m = v - b;
  Certificate cert;
  cert.tol = tol;
  cert.min_eigenvalue = symmetric_eigen(m).values.minCoeff();
  cert.complementarity = (z.transpose() * m * z).trace();
  cert.pass = cert.min_eigenvalue >= -tol && std::abs(cert.complementarity) <= tol;
  return cert;
}

// Rank of a configuration judged from its singular value profile.
struct RankReport {
  Vector singular_values;  // descending
  int rank = 0;            // values above tol_rel times the largest
  double tol_rel = 1e-6;
  int approx_rank = 0;  // same count at the looser approx_tol_rel
  double approx_tol_rel = 1e-2;
};

inline RankReport gower_rank(const Matrix& z, double tol_rel = 1e-6,
                             double approx_tol_rel = 1e-2) {
  RankReport report;
  report.tol_rel = tol_rel;
  report.approx_tol_rel = approx_tol_rel;
  report.singular_values = thin_svd(z).values;
  const double top = report.singular_values.size() ? report.singular_values(0) : 0.0;
  if (top > 0.0) {
    for (Eigen::Index i = 0; i < report.singular_values.size(); ++i) {
      if (report.singular_values(i) > tol_rel * top) ++report.rank;
      if (report.singular_values(i) > approx_tol_rel * top) ++report.approx_rank;
    }
  }
  return report;
}

// Stationarity check for a one-dimensional configuration: with fixed signs
// the minimizer is closed-form, so a stationary x must reproduce itself.
struct UniCheck {
  Vector xhat;
  double max_deviation = 0.0;
};

inline UniCheck check_uni(const MdsProblem& problem, const Vector& x) {
  const Eigen::Index n = problem.dissim.rows();
  if (x.size() != n) throw std::invalid_argument("check_uni: coordinate count does not match problem");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if (x(i) == x(j))
        throw std::domain_error("check_uni: tied coordinates at positions " + std::to_string(j + 1) +
                                " and " + std::to_string(i + 1));
  Vector u = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double sign = x(i) > x(j) ? 1.0 : -1.0;
      s += problem.weights(i, j) * problem.dissim(i, j) * sign;
    }
    u(i) = s;
  }
  UniCheck out;
  out.xhat = v_pseudoinverse(build_v(problem)) * u;
  out.max_deviation = (x - out.xhat).cwiseAbs().maxCoeff();
  return out;
}

// Smallest penalty weight that certifies a p-dimensional stationary point
// as recoverable: max(0, rho(V^+ B(X)) - 1), computed on the symmetrized
// product so the spectrum is real.
inline double lambda_bound(const MdsProblem& problem, const Matrix& x) {
  if (x.rows() != problem.dissim.rows())
    throw std::invalid_argument("lambda_bound: configuration size does not match problem");
  const Matrix v = build_v(problem);
  const Matrix vinv = v_pseudoinverse(v);
  const Matrix b = build_b(problem, distances(x));
  const EigenPair es = symmetric_eigen(vinv);
  Vector root = es.values;
  for (Eigen::Index i = 0; i < root.size(); ++i) root(i) = root(i) > 0.0 ? std::sqrt(root(i)) : 0.0;
  const Matrix half = es.vectors * root.asDiagonal() * es.vectors.transpose();
  const double rho = symmetric_eigen(half * b * half).values(0);
  return std::max(0.0, rho - 1.0);
}

}  // namespace pfds
