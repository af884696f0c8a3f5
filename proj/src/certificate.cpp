#include "srcid/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace srcid {
namespace {

std::vector<char> membership(int n, const std::vector<int>& J) {
  std::vector<char> in_J(n, 0);
  for (int j : J) in_J[j] = 1;
  return in_J;
}

}  // namespace

double certificateMargin(const ForwardModel& model, const std::vector<int>& J,
                         const Eigen::VectorXd& c) {
  const int n = model.cols();
  const std::vector<char> in_J = membership(n, J);
  const Eigen::VectorXd pc = applyProjection(model, c);
  double gamma = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    if (!in_J[i] && model.weights[i] > 0.0) gamma = std::max(gamma, pc[i] / model.weights[i]);
  return gamma;
}

CertificateReport checkCertificate(const ForwardModel& model, std::vector<int> J,
                                   const CertificateOptions& options) {
  const int n = model.cols();
  const int k = model.rank();
  if (J.empty()) throw std::invalid_argument("checkCertificate: J is empty");
  if (!(options.delta > 0.0)) throw std::invalid_argument("checkCertificate: delta must be > 0");
  std::sort(J.begin(), J.end());
  J.erase(std::unique(J.begin(), J.end()), J.end());
  for (int j : J) {
    if (j < 0 || j >= n)
      throw std::invalid_argument("checkCertificate: index " + std::to_string(j) +
                                  " outside [0, " + std::to_string(n) + ")");
    if (!(model.weights[j] > 0.0))
      throw std::invalid_argument("checkCertificate: zero weight at index " + std::to_string(j));
  }

  CertificateReport report;
  report.delta = options.delta;
  report.J = J;
  for (int j : J)
    if (model.weights[j] < options.weight_warning) report.low_weight_indices.push_back(j);

  // Variables: a (k, free) followed by one slack per index outside J.
  // Rows outside J whose weight vanishes are trivially satisfied and dropped.
  const std::vector<char> in_J = membership(n, J);
  std::vector<int> outside;
  for (int i = 0; i < n; ++i)
    if (!in_J[i] && model.weights[i] > 0.0) outside.push_back(i);
  const int nJ = static_cast<int>(J.size());
  const int nout = static_cast<int>(outside.size());

  LinearProgram lp;
  lp.A_eq = Eigen::MatrixXd::Zero(nJ + nout, k + nout);
  lp.b_eq.resize(nJ + nout);
  for (int r = 0; r < nJ; ++r) {
    lp.A_eq.row(r).head(k) = model.V.row(J[r]) / model.weights[J[r]];
    lp.b_eq[r] = 1.0;
  }
  for (int r = 0; r < nout; ++r) {
    const int i = outside[r];
    lp.A_eq.row(nJ + r).head(k) = model.V.row(i) / model.weights[i];
    lp.A_eq(nJ + r, k + r) = 1.0;
    lp.b_eq[nJ + r] = 1.0 - options.delta;
  }
  lp.objective = Eigen::VectorXd::Zero(k + nout);
  lp.objective.tail(nout).setOnes();
  lp.maximize = true;
  lp.lower = Eigen::VectorXd::Zero(k + nout);
  lp.lower.head(k).setConstant(-std::numeric_limits<double>::infinity());
  lp.upper = Eigen::VectorXd::Constant(k + nout, std::numeric_limits<double>::infinity());

  LpOptions lp_options;
  lp_options.phase_one_only = true;
  LpResult result = simplexSolve(lp, lp_options);
  if (result.status == LpStatus::Feasible && options.optimize) {
    lp_options.phase_one_only = false;
    LpResult optimized = simplexSolve(lp, lp_options);
    // An unbounded slack total still certifies; keep the phase-1 point then.
    if (optimized.status == LpStatus::Optimal) result = std::move(optimized);
  }
  report.lp_status = result.status;
  if (result.status != LpStatus::Feasible && result.status != LpStatus::Optimal) return report;

  report.c = model.V * result.x.head(k);
  report.gamma_hat = certificateMargin(model, J, report.c);
  // Confirm the conditions by direct evaluation rather than trusting the LP.
  const Eigen::VectorXd pc = applyProjection(model, report.c);
  bool ok = report.gamma_hat <= 1.0 - options.delta + 1e-7;
  for (int j : J) ok = ok && std::abs(pc[j] / model.weights[j] - 1.0) <= 1e-7;
  report.feasible = ok;
  return report;
}

BasisPursuitResult solveBasisPursuit(const ForwardModel& model, const Eigen::VectorXd& b,
                                     double s) {
  if (!(s > 0.0)) throw std::invalid_argument("solveBasisPursuit: s must be > 0");
  const int n = model.cols();
  const Eigen::VectorXd q = applyPinv(model, b);

  LinearProgram lp;
  lp.objective = model.weights;
  lp.A_eq = model.V.transpose();
  lp.b_eq = model.V.transpose() * q;
  lp.lower = Eigen::VectorXd::Zero(n);
  lp.upper = Eigen::VectorXd::Constant(n, s);

  const LpResult lp_result = simplexSolve(lp);
  if (lp_result.status == LpStatus::Unbounded)
    throw std::logic_error("solveBasisPursuit: LP reported unbounded with a nonnegative objective");
  BasisPursuitResult result;
  result.status = lp_result.status;
  if (lp_result.status == LpStatus::Optimal) {
    result.x = lp_result.x;
    result.weighted_l1 = lp_result.value;
  }
  return result;
}

}  // namespace srcid
