#pragma once

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pfds/core.hpp"
#include "pfds/linalg.hpp"
#include "pfds/problem.hpp"

namespace pfds {

struct OracleOptions {
  int max_n = 10;                  // refuse larger problems (n!/2 orders)
  bool count_local_minima = false; // also census the order-consistent orders
  int threads = 0;                 // 0: PFDS_THREADS env var, else hardware
};

struct OracleResult {
  std::vector<int> best_order;  // 0-based point indices, ascending coordinate
  Vector best_x;
  double best_stress = 0.0;
  long long orders_enumerated = 0;            // up to reflection
  std::optional<long long> local_minima;      // consistent orders, up to reflection
  std::optional<long long> tied_orders;       // skipped because coordinates tied
};

namespace detail {

inline int oracle_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PFDS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Closed-form coordinates for a fixed order: x = V^+ u with
// u_i = sum_j w_ij delta_ij sign(position_i - position_j).
class OrderEvaluator {
 public:
  OrderEvaluator(const MdsProblem& problem, const Matrix& vinv, const Matrix& wd)
      : problem_(problem),
        vinv_(vinv),
        wd_(wd),
        n_(problem.dissim.rows()),
        u_(n_),
        dist_(n_, n_) {
    dist_.setZero();
  }

  // order[k] is the point at ascending position k.
  const Vector& coords(const std::vector<int>& order) {
    for (Eigen::Index k = 0; k < n_; ++k) {
      const int i = order[static_cast<std::size_t>(k)];
      double s = 0.0;
      for (Eigen::Index l = 0; l < n_; ++l) {
        if (l == k) continue;
        const int j = order[static_cast<std::size_t>(l)];
        s += k > l ? wd_(i, j) : -wd_(i, j);
      }
      u_(i) = s;
    }
    x_ = vinv_ * u_;
    return x_;
  }

  double stress_of_coords() {
    for (Eigen::Index i = 0; i < n_; ++i)
      for (Eigen::Index j = 0; j < i; ++j) {
        const double d = std::abs(x_(i) - x_(j));
        dist_(i, j) = d;
        dist_(j, i) = d;
      }
    return stress(problem_, dist_);
  }

  // Strictly increasing along the order; exact ties reported separately.
  enum class Consistency { Consistent, Inconsistent, Tied };
  Consistency consistency(const std::vector<int>& order) const {
    bool ok = true;
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
      const double a = x_(order[k]);
      const double b = x_(order[k + 1]);
      if (a == b) return Consistency::Tied;
      if (a > b) ok = false;
    }
    return ok ? Consistency::Consistent : Consistency::Inconsistent;
  }

  const Vector& last_coords() const { return x_; }

 private:
  const MdsProblem& problem_;
  const Matrix& vinv_;
  const Matrix& wd_;
  Eigen::Index n_;
  Vector u_;
  Vector x_;
  Matrix dist_;
};

struct OracleBlockResult {
  double best_stress = 0.0;
  std::vector<int> best_order;
  Vector best_x;
  long long enumerated = 0;
  long long consistent = 0;
  long long tied = 0;
};

}  // namespace detail

// Coordinates and loss for one fixed order of the points.
inline std::pair<Vector, double> best_coords_for_order(const MdsProblem& problem,
                                                       const std::vector<int>& order) {
  const Eigen::Index n = problem.dissim.rows();
  if (order.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("oracle: order length does not match problem size");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int idx : order) {
    if (idx < 0 || idx >= n || seen[static_cast<std::size_t>(idx)])
      throw std::invalid_argument("oracle: order is not a permutation of the points");
    seen[static_cast<std::size_t>(idx)] = true;
  }
  const Matrix vinv = v_pseudoinverse(build_v(problem));
  const Matrix wd = problem.weights.cwiseProduct(problem.dissim);
  detail::OrderEvaluator eval(problem, vinv, wd);
  Vector x = eval.coords(order);
  return {std::move(x), eval.stress_of_coords()};
}

// Exact global minimum over all one-dimensional configurations, found by
// enumerating the n!/2 distinct orders (reflections are equivalent) and
// taking the closed-form minimizer of each. Optionally counts the orders
// whose minimizer respects the order (the local minima of the 1-D problem).
// Work is split over threads by (first, last) point pair; the reduction is
// deterministic regardless of thread count.
inline OracleResult global_min_1d(const MdsProblem& problem, const OracleOptions& options = {}) {
  const int n = problem.n();
  if (n > options.max_n)
    throw std::invalid_argument("oracle: n = " + std::to_string(n) + " exceeds max_n = " +
                                std::to_string(options.max_n) + " (enumeration is factorial)");
  require_solvable(problem);

  const Matrix vinv = v_pseudoinverse(build_v(problem));
  const Matrix wd = problem.weights.cwiseProduct(problem.dissim);

  // One block per ordered (first, last) pair with first < last; each block
  // permutes the interior points. Covers every order up to reflection once.
  struct Block {
    int first, last;
  };
  std::vector<Block> blocks;
  for (int f = 0; f < n; ++f)
    for (int l = f + 1; l < n; ++l) blocks.push_back({f, l});

  std::vector<detail::OracleBlockResult> per_block(blocks.size());
  const int threads = std::min<int>(detail::oracle_thread_count(options.threads),
                                    static_cast<int>(blocks.size()));

  auto run_block = [&](std::size_t bi) {
    const Block blk = blocks[bi];
    detail::OracleBlockResult& out = per_block[bi];
    std::vector<int> middle;
    middle.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      if (i != blk.first && i != blk.last) middle.push_back(i);
    std::vector<int> order(static_cast<std::size_t>(n));
    order.front() = blk.first;
    order.back() = blk.last;
    detail::OrderEvaluator eval(problem, vinv, wd);
    bool have_best = false;
    do {
      std::copy(middle.begin(), middle.end(), order.begin() + 1);
      eval.coords(order);
      const double s = eval.stress_of_coords();
      ++out.enumerated;
      if (options.count_local_minima) {
        switch (eval.consistency(order)) {
          case detail::OrderEvaluator::Consistency::Consistent: ++out.consistent; break;
          case detail::OrderEvaluator::Consistency::Tied: ++out.tied; break;
          case detail::OrderEvaluator::Consistency::Inconsistent: break;
        }
      }
      if (!have_best || s < out.best_stress) {
        have_best = true;
        out.best_stress = s;
        out.best_order = order;
        out.best_x = eval.last_coords();
      }
    } while (std::next_permutation(middle.begin(), middle.end()));
  };

  if (threads <= 1) {
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) run_block(bi);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t bi = static_cast<std::size_t>(t); bi < blocks.size();
             bi += static_cast<std::size_t>(threads))
          run_block(bi);
      });
    for (auto& th : pool) th.join();
  }

  OracleResult result;
  bool have_best = false;
  long long consistent = 0, tied = 0;
  for (const auto& blk : per_block) {
    result.orders_enumerated += blk.enumerated;
    consistent += blk.consistent;
    tied += blk.tied;
    if (!have_best || blk.best_stress < result.best_stress) {
      have_best = true;
      result.best_stress = blk.best_stress;
      result.best_order = blk.best_order;
      result.best_x = blk.best_x;
    }
  }
  if (options.count_local_minima) {
    result.local_minima = consistent;
    result.tied_orders = tied;
  }
  return result;
}

// Census of the one-dimensional local minima (orders whose closed-form
// minimizer strictly respects the order), counted up to reflection.
inline long long count_local_minima_1d(const MdsProblem& problem, OracleOptions options = {}) {
  options.count_local_minima = true;
  return *global_min_1d(problem, options).local_minima;
}

}  // namespace pfds
