// ADMM for the box-constrained weighted-l1 recovery problem
//
//   min_{0 <= x <= s}  0.5 ||P x - q||^2 + alpha sum_i w_i |x_i|,  q = A^+ b   (Projected)
//   min_{0 <= x <= s}  0.5 ||A_k x - b||^2 + alpha sum_i w_i |x_i|               (Direct)
//
// with the splitting x = z. The x-update is a closed-form solve through the
// model's SVD; the z-update is the elementwise box-clipped soft threshold.
#ifndef SRCID_ADMM_HPP
#define SRCID_ADMM_HPP

#include "srcid/forward_model.hpp"

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <vector>

namespace srcid {

enum class ObjectiveMode { Projected, Direct };

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RecoveryProblem {
  const ForwardModel* model = nullptr;
  Eigen::VectorXd b;
  ObjectiveMode mode = ObjectiveMode::Projected;
  double alpha = 1e-4;
  double s = kUnbounded;
  int max_iters = 5000;
  // Penalty; <= 0 selects rho = alpha, i.e. unit penalty relative to the
  // regularization weight.
  double rho = 0.0;
  // <= 0 selects 1e-8 * sqrt(n).
  double tol_primal = 0.0;
  double tol_dual = 0.0;
  // Replaces the model weights when non-empty (e.g. all ones for W = I).
  Eigen::VectorXd weights;
  bool record_history = true;

  RecoveryProblem() = default;
  RecoveryProblem(const ForwardModel& m, Eigen::VectorXd data) : model(&m), b(std::move(data)) {}

  const Eigen::VectorXd& effectiveWeights() const {
    return weights.size() > 0 ? weights : model->weights;
  }
  double effectiveRho() const { return rho > 0.0 ? rho : alpha; }
};

/// Iterate pair for warm starts.
struct AdmmState {
  Eigen::VectorXd z;
  Eigen::VectorXd u;  // scaled dual, valid for `rho`
  double rho = 0.0;
};

struct AdmmResult {
  Eigen::VectorXd x;  // the box-feasible iterate z
  int iterations_run = 0;
  std::vector<double> primal_residual_history;
  std::vector<double> dual_residual_history;
  std::vector<double> objective_history;
  bool converged = false;
  double weighted_l1 = 0.0;
  double data_misfit = 0.0;  // ||A x - b||_2 with the full A
  AdmmState final_state;
};

/// Throws std::invalid_argument on malformed problems and DivergenceError on
/// non-finite iterates.
AdmmResult solve(const RecoveryProblem& problem, const AdmmState* warm_start = nullptr);

/// Mode-dependent objective value at x.
double objective(const RecoveryProblem& problem, const Eigen::VectorXd& x);

/// q = A^+ b, the target of the projected objective.
Eigen::VectorXd projectedTarget(const RecoveryProblem& problem);

void validate(const RecoveryProblem& problem);

}  // namespace srcid

#endif  // SRCID_ADMM_HPP
