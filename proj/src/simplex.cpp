#include "srcid/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace srcid {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kTieTol = 1e-12;

// Internal column j represents sign * (original variable - offset).
struct ColumnMap {
  int var = 0;
  double sign = 1.0;
};

struct Tableau {
  Eigen::MatrixXd T;  // B^{-1} [A | I_art]
  Eigen::VectorXd beta;
  Eigen::RowVectorXd reduced;
  Eigen::VectorXd upper;
  std::vector<int> basis;
  std::vector<char> is_basic;
  std::vector<char> at_upper;
  std::vector<char> excluded;

  int rows() const { return static_cast<int>(T.rows()); }
  int cols() const { return static_cast<int>(T.cols()); }

  double nonbasicValue(int j) const { return at_upper[j] ? upper[j] : 0.0; }

  void computeReducedCosts(const Eigen::VectorXd& cost) {
    Eigen::RowVectorXd cb(rows());
    for (int i = 0; i < rows(); ++i) cb[i] = cost[basis[i]];
    reduced = cost.transpose() - cb * T;
  }

  void pivot(int r, int q) {
    const Eigen::RowVectorXd prow = T.row(r) / T(r, q);
    const Eigen::VectorXd col = T.col(q);
    T.noalias() -= col * prow;
    T.row(r) = prow;
    reduced -= reduced[q] * prow;
  }
};

enum class LoopStatus { Optimal, Unbounded, IterationLimit };

LoopStatus runSimplex(Tableau& t, int max_iterations, int& iterations) {
  const int m = t.rows();
  const int ncols = t.cols();
  while (true) {
    int q = -1;
    for (int j = 0; j < ncols; ++j) {
      if (t.is_basic[j] || t.excluded[j]) continue;
      const bool can_increase = !t.at_upper[j] && t.upper[j] > 0.0 && t.reduced[j] < -kCostTol;
      const bool can_decrease = t.at_upper[j] && t.reduced[j] > kCostTol;
      if (can_increase || can_decrease) {
        q = j;
        break;
      }
    }
    if (q < 0) return LoopStatus::Optimal;
    if (iterations >= max_iterations) return LoopStatus::IterationLimit;
    ++iterations;

    const double dir = t.at_upper[q] ? -1.0 : 1.0;
    double theta = t.upper[q];
    int leave_row = -1;
    bool leave_to_upper = false;
    for (int i = 0; i < m; ++i) {
      const double a = t.T(i, q) * dir;
      const int bi = t.basis[i];
      double step;
      bool to_upper;
      if (a > kPivotTol) {
        step = std::max(t.beta[i], 0.0) / a;
        to_upper = false;
      } else if (a < -kPivotTol && std::isfinite(t.upper[bi])) {
        step = std::max(t.upper[bi] - t.beta[i], 0.0) / -a;
        to_upper = true;
      } else {
        continue;
      }
      const bool better = step < theta - kTieTol;
      const bool tie_smaller = leave_row >= 0 && step <= theta + kTieTol && bi < t.basis[leave_row];
      if (better || tie_smaller) {
        theta = std::min(theta, step);
        leave_row = i;
        leave_to_upper = to_upper;
      }
    }
    if (leave_row < 0 && std::isinf(theta)) return LoopStatus::Unbounded;

    const double entering_value = t.nonbasicValue(q) + dir * theta;
    t.beta.noalias() -= (theta * dir) * t.T.col(q);
    if (leave_row < 0) {
      t.at_upper[q] = !t.at_upper[q];
      continue;
    }
    const int leaving = t.basis[leave_row];
    t.pivot(leave_row, q);
    t.beta[leave_row] = entering_value;
    t.is_basic[leaving] = 0;
    t.at_upper[leaving] = leave_to_upper;
    t.is_basic[q] = 1;
    t.at_upper[q] = 0;
    t.basis[leave_row] = q;
  }
}

void validateLp(const LinearProgram& lp) {
  const Eigen::Index n = lp.objective.size();
  if (lp.A_eq.cols() != n && lp.A_eq.size() != 0)
    throw std::invalid_argument("simplex: A_eq has " + std::to_string(lp.A_eq.cols()) +
                                " columns, expected " + std::to_string(n));
  if (lp.A_eq.rows() != lp.b_eq.size())
    throw std::invalid_argument("simplex: A_eq rows and b_eq length differ");
  if (lp.lower.size() != 0 && lp.lower.size() != n)
    throw std::invalid_argument("simplex: lower bound length mismatch");
  if (lp.upper.size() != 0 && lp.upper.size() != n)
    throw std::invalid_argument("simplex: upper bound length mismatch");
  if (!lp.b_eq.allFinite() || !lp.A_eq.allFinite() || !lp.objective.allFinite())
    throw std::invalid_argument("simplex: non-finite problem data");
  for (Eigen::Index j = 0; j < n; ++j) {
    const double lo = lp.lower.size() ? lp.lower[j] : 0.0;
    const double hi = lp.upper.size() ? lp.upper[j] : kInf;
    if (lo > hi || lo == kInf || hi == -kInf)
      throw std::invalid_argument("simplex: empty bound interval for variable " +
                                  std::to_string(j));
  }
}

}  // namespace

std::string_view toString(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Feasible: return "feasible";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration_limit";
  }
  return "unknown";
}

LpResult simplexSolve(const LinearProgram& lp, const LpOptions& options) {
  validateLp(lp);
  const int n = lp.numVariables();
  const int m = static_cast<int>(lp.b_eq.size());

  // Shift and split original variables into columns with bounds [0, u].
  std::vector<ColumnMap> columns;
  std::vector<double> col_upper;
  Eigen::VectorXd offset = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    const double lo = lp.lower.size() ? lp.lower[j] : 0.0;
    const double hi = lp.upper.size() ? lp.upper[j] : kInf;
    if (std::isfinite(lo)) {
      offset[j] = lo;
      columns.push_back({j, 1.0});
      col_upper.push_back(hi - lo);
    } else if (std::isfinite(hi)) {
      offset[j] = hi;
      columns.push_back({j, -1.0});
      col_upper.push_back(kInf);
    } else {
      columns.push_back({j, 1.0});
      col_upper.push_back(kInf);
      columns.push_back({j, -1.0});
      col_upper.push_back(kInf);
    }
  }
  const int nstruct = static_cast<int>(columns.size());

  Eigen::MatrixXd A(m, nstruct);
  Eigen::VectorXd cost(nstruct);
  const double sense = lp.maximize ? -1.0 : 1.0;
  for (int c = 0; c < nstruct; ++c) {
    if (m > 0) A.col(c) = columns[c].sign * lp.A_eq.col(columns[c].var);
    cost[c] = sense * columns[c].sign * lp.objective[columns[c].var];
  }
  Eigen::VectorXd rhs = m > 0 ? Eigen::VectorXd(lp.b_eq - lp.A_eq * offset) : Eigen::VectorXd();

  // Crash basis: a column with a single nonzero that can absorb the row's
  // right-hand side within its bounds. Remaining rows get artificials.
  std::vector<int> nnz_row(nstruct, -1);
  for (int c = 0; c < nstruct; ++c) {
    int count = 0;
    for (int i = 0; i < m; ++i) {
      if (A(i, c) != 0.0) {
        ++count;
        nnz_row[c] = i;
      }
    }
    if (count != 1) nnz_row[c] = -1;
  }
  std::vector<int> row_basis(m, -1);
  std::vector<char> used(nstruct, 0);
  for (int c = 0; c < nstruct; ++c) {
    const int i = nnz_row[c];
    if (i < 0 || row_basis[i] >= 0) continue;
    const double value = rhs[i] / A(i, c);
    if (value >= 0.0 && value <= col_upper[c]) {
      row_basis[i] = c;
      used[c] = 1;
    }
  }
  std::vector<int> artificial_rows;
  for (int i = 0; i < m; ++i)
    if (row_basis[i] < 0) artificial_rows.push_back(i);
  const int nart = static_cast<int>(artificial_rows.size());
  const int ncols = nstruct + nart;

  Tableau t;
  t.T = Eigen::MatrixXd::Zero(m, ncols);
  t.T.leftCols(nstruct) = A;
  t.beta = rhs;
  t.upper.resize(ncols);
  for (int c = 0; c < nstruct; ++c) t.upper[c] = col_upper[c];
  t.basis.assign(m, -1);
  t.is_basic.assign(ncols, 0);
  t.at_upper.assign(ncols, 0);
  t.excluded.assign(ncols, 0);
  for (int i = 0; i < m; ++i) {
    if (row_basis[i] >= 0) {
      const double scale = A(i, row_basis[i]);
      t.T.row(i) /= scale;
      t.beta[i] /= scale;
      t.basis[i] = row_basis[i];
    }
  }
  for (int a = 0; a < nart; ++a) {
    const int i = artificial_rows[a];
    if (t.beta[i] < 0.0) {
      t.T.row(i) *= -1.0;
      t.beta[i] *= -1.0;
    }
    t.T(i, nstruct + a) = 1.0;
    t.upper[nstruct + a] = kInf;
    t.basis[i] = nstruct + a;
  }
  for (int i = 0; i < m; ++i) t.is_basic[t.basis[i]] = 1;

  LpResult result;
  int iterations = 0;
  const double rhs_scale = std::max(1.0, m > 0 ? rhs.cwiseAbs().maxCoeff() : 0.0);

  if (nart > 0) {
    Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(ncols);
    phase1_cost.tail(nart).setOnes();
    t.computeReducedCosts(phase1_cost);
    if (runSimplex(t, options.max_iterations, iterations) == LoopStatus::IterationLimit) {
      result.status = LpStatus::IterationLimit;
      result.iterations = iterations;
      return result;
    }
    double infeasibility = 0.0;
    for (int i = 0; i < m; ++i)
      if (t.basis[i] >= nstruct) infeasibility += std::max(t.beta[i], 0.0);
    if (infeasibility > options.feasibility_tol * rhs_scale) {
      result.status = LpStatus::Infeasible;
      result.iterations = iterations;
      return result;
    }
    // Pivot zero-valued artificials out where the row is not redundant.
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] < nstruct) continue;
      for (int c = 0; c < nstruct; ++c) {
        if (t.is_basic[c] || std::abs(t.T(i, c)) <= 1e-7) continue;
        const int leaving = t.basis[i];
        const double value = t.nonbasicValue(c);
        t.pivot(i, c);
        t.beta[i] = value;
        t.is_basic[leaving] = 0;
        t.at_upper[leaving] = 0;
        t.is_basic[c] = 1;
        t.at_upper[c] = 0;
        t.basis[i] = c;
        break;
      }
    }
    for (int a = nstruct; a < ncols; ++a) {
      t.excluded[a] = 1;
      t.upper[a] = 0.0;
    }
  }

  LpStatus status = LpStatus::Feasible;
  if (!options.phase_one_only) {
    Eigen::VectorXd phase2_cost = Eigen::VectorXd::Zero(ncols);
    phase2_cost.head(nstruct) = cost;
    t.computeReducedCosts(phase2_cost);
    switch (runSimplex(t, options.max_iterations, iterations)) {
      case LoopStatus::Optimal: status = LpStatus::Optimal; break;
      case LoopStatus::Unbounded: status = LpStatus::Unbounded; break;
      case LoopStatus::IterationLimit: status = LpStatus::IterationLimit; break;
    }
  }
  result.iterations = iterations;
  result.status = status;
  if (status == LpStatus::Unbounded || status == LpStatus::IterationLimit) return result;

  // Recompute basic values from the original data to shed pivoting error.
  Eigen::VectorXd y(ncols);
  for (int c = 0; c < ncols; ++c) y[c] = t.is_basic[c] ? 0.0 : t.nonbasicValue(c);
  if (m > 0) {
    Eigen::MatrixXd B(m, m);
    Eigen::VectorXd residual = rhs - A * y.head(nstruct);
    for (int i = 0; i < m; ++i) {
      const int c = t.basis[i];
      if (c < nstruct) {
        B.col(i) = A.col(c);
      } else {
        B.col(i).setZero();
        B(artificial_rows[c - nstruct], i) = 1.0;
      }
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    Eigen::VectorXd xb = lu.isInvertible() ? Eigen::VectorXd(lu.solve(residual)) : t.beta;
    if (!xb.allFinite() || (B * xb - residual).cwiseAbs().maxCoeff() > 1e-6 * rhs_scale) xb = t.beta;
    for (int i = 0; i < m; ++i) y[t.basis[i]] = xb[i];
  }

  result.x = offset;
  for (int c = 0; c < nstruct; ++c) result.x[columns[c].var] += columns[c].sign * y[c];
  result.value = lp.objective.dot(result.x);
  return result;
}

}  // namespace srcid
