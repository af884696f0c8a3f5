// Dense two-phase primal simplex for small linear programs
//
//   min (or max) c^T x   s.t.  A x = b,  lower <= x <= upper.
//
// Bounds may be infinite. Finite upper bounds are handled implicitly
// (bounded-variable simplex) so they add no rows. Entering and leaving
// variables follow Bland's smallest-index rule.
#ifndef SRCID_SIMPLEX_HPP
#define SRCID_SIMPLEX_HPP

#include <Eigen/Dense>

#include <string_view>

namespace srcid {

struct LinearProgram {
  Eigen::VectorXd objective;
  bool maximize = false;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  // Empty vectors mean lower = 0 and upper = +inf.
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int numVariables() const { return static_cast<int>(objective.size()); }
};

enum class LpStatus { Optimal, Feasible, Infeasible, Unbounded, IterationLimit };

std::string_view toString(LpStatus status);

struct LpOptions {
  int max_iterations = 200000;
  double feasibility_tol = 1e-8;
  // Stop after phase 1 with status Feasible when a feasible point exists.
  bool phase_one_only = false;
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
};

/// Throws std::invalid_argument on inconsistent dimensions, non-finite data or
/// lower > upper.
LpResult simplexSolve(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace srcid

#endif  // SRCID_SIMPLEX_HPP
