#include "srcid/admm.hpp"

#include "srcid/prox.hpp"

#include <cmath>
#include <string>

namespace srcid {

void validate(const RecoveryProblem& problem) {
  if (problem.model == nullptr) throw std::invalid_argument("recovery problem: no forward model");
  const ForwardModel& model = *problem.model;
  if (problem.b.size() != model.rows())
    throw std::invalid_argument("recovery problem: data length " +
                                std::to_string(problem.b.size()) + " != " +
                                std::to_string(model.rows()));
  if (!(problem.alpha > 0.0)) throw std::invalid_argument("recovery problem: alpha must be > 0");
  if (!(problem.s > 0.0)) throw std::invalid_argument("recovery problem: s must be > 0");
  if (problem.max_iters < 1) throw std::invalid_argument("recovery problem: max_iters must be >= 1");
  if (problem.weights.size() != 0 && problem.weights.size() != model.cols())
    throw std::invalid_argument("recovery problem: weight override has wrong length");
}

Eigen::VectorXd projectedTarget(const RecoveryProblem& problem) {
  return applyPinv(*problem.model, problem.b);
}

namespace {

// `target` is q in projected mode and b in direct mode.
double objectiveAt(const RecoveryProblem& problem, const Eigen::VectorXd& target,
                   const Eigen::VectorXd& x) {
  const ForwardModel& model = *problem.model;
  const double penalty = problem.alpha * problem.effectiveWeights().dot(x.cwiseAbs());
  if (problem.mode == ObjectiveMode::Projected)
    return 0.5 * (applyProjection(model, x) - target).squaredNorm() + penalty;
  const Eigen::VectorXd ax = model.U * model.sigma.cwiseProduct(model.V.transpose() * x);
  return 0.5 * (ax - target).squaredNorm() + penalty;
}

}  // namespace

double objective(const RecoveryProblem& problem, const Eigen::VectorXd& x) {
  validate(problem);
  if (x.size() != problem.model->cols())
    throw std::invalid_argument("objective: expected length " +
                                std::to_string(problem.model->cols()));
  return objectiveAt(problem,
                     problem.mode == ObjectiveMode::Projected ? projectedTarget(problem) : problem.b,
                     x);
}

AdmmResult solve(const RecoveryProblem& problem, const AdmmState* warm_start) {
  validate(problem);
  const ForwardModel& model = *problem.model;
  const Eigen::Index n = model.cols();
  const double rho = problem.effectiveRho();
  const double default_tol = 1e-8 * std::sqrt(static_cast<double>(n));
  const double tol_primal = problem.tol_primal > 0.0 ? problem.tol_primal : default_tol;
  const double tol_dual = problem.tol_dual > 0.0 ? problem.tol_dual : default_tol;
  const Eigen::VectorXd thresholds = problem.alpha / rho * problem.effectiveWeights();

  // Data term of the x-update right-hand side.
  const Eigen::VectorXd target =
      problem.mode == ObjectiveMode::Projected ? projectedTarget(problem) : problem.b;
  const Eigen::VectorXd data_rhs =
      problem.mode == ObjectiveMode::Projected
          ? target
          : Eigen::VectorXd(model.V * model.sigma.cwiseProduct(model.U.transpose() * problem.b));

  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  if (warm_start != nullptr) {
    if (warm_start->z.size() != n || warm_start->u.size() != n)
      throw std::invalid_argument("admm: warm start has wrong length");
    z = warm_start->z;
    u = warm_start->u;
    // The scaled dual is y / rho.
    if (warm_start->rho > 0.0) u *= warm_start->rho / rho;
  }

  AdmmResult result;
  if (problem.record_history) {
    result.primal_residual_history.reserve(problem.max_iters);
    result.dual_residual_history.reserve(problem.max_iters);
    result.objective_history.reserve(problem.max_iters);
  }

  Eigen::VectorXd x(n), z_old(n);
  for (int iter = 0; iter < problem.max_iters; ++iter) {
    const Eigen::VectorXd rhs = data_rhs + rho * (z - u);
    x = problem.mode == ObjectiveMode::Projected ? applyShiftedProjectionInverse(model, rho, rhs)
                                                 : applyShiftedNormalInverse(model, rho, rhs);
    z_old = z;
    z = proxWeightedL1Box(x + u, thresholds, problem.s);
    u += x - z;

    const double primal = (x - z).norm();
    const double dual = rho * (z - z_old).norm();
    if (!std::isfinite(primal) || !std::isfinite(dual))
      throw DivergenceError("admm: non-finite residual at iteration " + std::to_string(iter + 1));
    result.iterations_run = iter + 1;
    if (problem.record_history) {
      result.primal_residual_history.push_back(primal);
      result.dual_residual_history.push_back(dual);
      result.objective_history.push_back(objectiveAt(problem, target, z));
    }
    if (primal <= tol_primal && dual <= tol_dual) {
      result.converged = true;
      break;
    }
  }

  result.x = z;
  result.weighted_l1 = problem.effectiveWeights().dot(z);
  result.data_misfit = (model.A * z - problem.b).norm();
  result.final_state = {std::move(z), std::move(u), rho};
  return result;
}

}  // namespace srcid
