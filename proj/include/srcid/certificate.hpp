// Dual certificates for support recovery and the exact basis-pursuit LP.
//
// A certificate for the index set J is a vector c with
//   p_j . c = 1        for j in J,
//   p_i . c <= 1 - d   for i not in J,
// where p_i = P e_i / ||P e_i||. Its existence guarantees that every
// weighted-l1 minimizer consistent with the data is supported in J.
#ifndef SRCID_CERTIFICATE_HPP
#define SRCID_CERTIFICATE_HPP

#include "srcid/forward_model.hpp"
#include "srcid/simplex.hpp"

#include <Eigen/Dense>

#include <limits>
#include <vector>

namespace srcid {

inline constexpr double kDefaultCertificateDelta = 1e-3;
inline constexpr double kDefaultWeightWarning = 1e-3;

struct CertificateOptions {
  double delta = kDefaultCertificateDelta;
  // Maximize the total slack after feasibility is found.
  bool optimize = false;
  double weight_warning = kDefaultWeightWarning;
};

struct CertificateReport {
  bool feasible = false;
  Eigen::VectorXd c;  // length n, meaningful when feasible
  double gamma_hat = 0.0;
  double delta = kDefaultCertificateDelta;
  std::vector<int> J;               // sorted, 0-based
  std::vector<int> low_weight_indices;  // members of J with w_j below the warning level
  LpStatus lp_status = LpStatus::Infeasible;
};

/// Searches for a certificate of J. Only P c enters the conditions, so c is
/// sought in the range of V_k. Throws std::invalid_argument for an empty or
/// out-of-range J, a non-positive delta or a zero weight in J.
CertificateReport checkCertificate(const ForwardModel& model, std::vector<int> J,
                                   const CertificateOptions& options = {});

/// max over i not in J of p_i . c.
double certificateMargin(const ForwardModel& model, const std::vector<int>& J,
                         const Eigen::VectorXd& c);

struct BasisPursuitResult {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double weighted_l1 = 0.0;
};

/// min sum_i w_i x_i  s.t.  V_k^T x = V_k^T A^+ b,  0 <= x <= s.
BasisPursuitResult solveBasisPursuit(const ForwardModel& model, const Eigen::VectorXd& b,
                                     double s = std::numeric_limits<double>::infinity());

}  // namespace srcid

#endif  // SRCID_CERTIFICATE_HPP
