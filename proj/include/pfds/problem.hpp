#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfds/linalg.hpp"

namespace pfds {

// A metric scaling instance: symmetric hollow dissimilarities with
// nonnegative symmetric weights and one label per point.
struct MdsProblem {
  Matrix weights;
  Matrix dissim;
  std::vector<std::string> labels;

  int n() const { return static_cast<int>(dissim.rows()); }
};

namespace detail {

inline void check_square_symmetric_hollow(const Matrix& m, const char* what) {
  using std::to_string;
  if (m.rows() != m.cols())
    throw std::invalid_argument(std::string(what) + ": matrix not square (" +
                                to_string(m.rows()) + "x" + to_string(m.cols()) + ")");
  if (m.rows() < 2) throw std::invalid_argument(std::string(what) + ": need at least 2 points");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (m(i, i) != 0.0)
      throw std::invalid_argument(std::string(what) + ": nonzero diagonal at row " +
                                  to_string(i + 1));
    for (Eigen::Index j = 0; j < i; ++j) {
      if (m(i, j) != m(j, i))
        throw std::invalid_argument(std::string(what) + ": not symmetric at (" +
                                    to_string(i + 1) + "," + to_string(j + 1) + ")");
      if (!(m(i, j) >= 0.0))
        throw std::invalid_argument(std::string(what) + ": negative or non-finite entry at (" +
                                    to_string(i + 1) + "," + to_string(j + 1) + ")");
    }
  }
}

inline std::vector<std::string> default_labels(int n) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) out.push_back(std::to_string(i));
  return out;
}

}  // namespace detail

// Validate and assemble a problem. Weights default to all ones off the
// diagonal, labels default to "1".."n".
inline MdsProblem make_problem(Matrix dissim, std::optional<Matrix> weights = std::nullopt,
                               std::vector<std::string> labels = {}) {
  detail::check_square_symmetric_hollow(dissim, "dissimilarities");
  const Eigen::Index n = dissim.rows();
  Matrix w;
  if (weights) {
    w = std::move(*weights);
    detail::check_square_symmetric_hollow(w, "weights");
    if (w.rows() != n) throw std::invalid_argument("weights: size does not match dissimilarities");
  } else {
    w = Matrix::Ones(n, n);
    w.diagonal().setZero();
  }
  if (labels.empty()) {
    labels = detail::default_labels(static_cast<int>(n));
  } else if (labels.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("labels: count does not match matrix size");
  }
  return MdsProblem{std::move(w), std::move(dissim), std::move(labels)};
}

// Solvers additionally need every off-diagonal weight and dissimilarity
// strictly positive (zero distances would make the update undefined).
inline void require_solvable(const MdsProblem& problem) {
  const Eigen::Index n = problem.dissim.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j) {
      if (!(problem.weights(i, j) > 0.0))
        throw std::invalid_argument("problem not solvable: zero weight at (" +
                                    std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      if (!(problem.dissim(i, j) > 0.0))
        throw std::invalid_argument("problem not solvable: zero dissimilarity at (" +
                                    std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    }
}

// Scale s such that dividing the dissimilarities by s makes the weighted
// sum of squares equal 4 (so that a zero configuration has loss 1).
inline double normalization_scale(const MdsProblem& problem) {
  const double ssq =
      (problem.weights.array() * problem.dissim.array().square()).sum();
  if (!(ssq > 0.0)) throw std::invalid_argument("normalize: all dissimilarities are zero");
  return std::sqrt(ssq / 4.0);
}

// Return a copy of the problem with dissimilarities rescaled so that
// (1/4) * sum of w * delta^2 equals 1.
inline MdsProblem normalize(const MdsProblem& problem) {
  MdsProblem out = problem;
  out.dissim /= normalization_scale(problem);
  return out;
}

}  // namespace pfds
