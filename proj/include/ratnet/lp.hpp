#pragma once

#include <Eigen/Core>
#include <iosfwd>

#include "ratnet/types.hpp"

namespace ratnet::lp {

enum class Status { Optimal, Infeasible, Unbounded };

// Dense LP in inequality form with optional per-variable box bounds:
//   minimize c'y  subject to  A y <= b,  lo <= y <= hi.
// Use +-infinity in lo/hi for free variables.
struct Problem {
  Eigen::VectorXd c;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  std::size_t rows() const { return static_cast<std::size_t>(A.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(c.size()); }
  void validate() const;
};

// Convenience: problem with n free variables and no rows yet.
Problem make_problem(std::size_t rows, std::size_t cols);

struct Options {
  long max_iters = 0;  // 0 = 50 * (rows + cols)
};

struct Solution {
  Status status = Status::Infeasible;
  Eigen::VectorXd y;  // present iff Optimal
  double objective = 0.0;
  long iterations = 0;
};

// Deterministic two-phase revised simplex. The workloads here have far more
// rows than columns, so the simplex runs on the dual and the basis stays
// cols x cols; Dantzig pricing switches to Bland's rule after a degenerate
// streak. Throws NumericalError when the iteration limit is hit (solver
// stalled, distinct from Infeasible).
Solution solve(const Problem& p, const Options& opts = {});

// Fixed-format plain-text listing for offline inspection. solve() appends
// every problem it is given to the file named by RATNET_LP_DUMP when that
// environment variable is set.
void dump(const Problem& p, std::ostream& os);

}  // namespace ratnet::lp
