// Discrete boundary-observation forward map and its truncated SVD.
//
// A = M_b^{1/2} (L_eps^{-1} M R)|_boundary with L_eps = K + eps*M. The same
// rank-k SVD A ~ U_k diag(sigma) V_k^T defines the pseudoinverse, the
// projection P = V_k V_k^T and the weights w_i = ||P e_i||_2.
#ifndef SRCID_FORWARD_MODEL_HPP
#define SRCID_FORWARD_MODEL_HPP

#include "srcid/fem.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace srcid {

inline constexpr int kDefaultSvdRank = 20;

/// L_eps is singular or too ill-conditioned to factor reliably.
class SingularOperatorError : public std::runtime_error {
 public:
  SingularOperatorError(const std::string& what, double condition_estimate)
      : std::runtime_error(what), condition_estimate_(condition_estimate) {}
  double conditionEstimate() const { return condition_estimate_; }

 private:
  double condition_estimate_;
};

struct ForwardModel {
  Eigen::MatrixXd A;      // m x n
  Eigen::MatrixXd U;      // m x k
  Eigen::VectorXd sigma;  // k, descending, > 0
  Eigen::MatrixXd V;      // n x k
  Eigen::VectorXd weights;
  double epsilon = 1.0;
  // Mesh descriptors; 0 when the model wraps a plain matrix.
  int state_nodes_per_side = 0;
  int source_nodes_per_side = 0;
  int requested_rank = 0;
  double condition_estimate = 0.0;  // of L_eps, when built from meshes
  std::vector<std::string> warnings;

  int rows() const { return static_cast<int>(A.rows()); }
  int cols() const { return static_cast<int>(A.cols()); }
  int rank() const { return static_cast<int>(sigma.size()); }
};

/// Assembles A on the given meshes and truncates its SVD at `svd_rank`.
/// `source` must equal `state` in size or be its nested coarsening.
/// Throws SingularOperatorError when L_eps cannot be factored.
ForwardModel buildForward(const TriMesh& state_mesh, const TriMesh& source_mesh, double epsilon,
                          int svd_rank = kDefaultSvdRank);

/// A x for one source vector via a single sparse solve, without forming A.
Eigen::VectorXd applyForward(const TriMesh& state_mesh, const TriMesh& source_mesh,
                             double epsilon, const Eigen::VectorXd& x);

/// Wraps an arbitrary matrix. `svd_rank <= 0` keeps the full numerical rank
/// (singular values above 1e-12 * sigma_1).
ForwardModel modelFromMatrix(Eigen::MatrixXd A, int svd_rank = 0);

/// Rank-k pseudoinverse image V_k Sigma_k^{-1} U_k^T b.
template <typename Derived>
Eigen::VectorXd applyPinv(const ForwardModel& model, const Eigen::MatrixBase<Derived>& b) {
  if (b.size() != model.rows())
    throw std::invalid_argument("applyPinv: expected length " + std::to_string(model.rows()) +
                                ", got " + std::to_string(b.size()));
  return model.V * (model.U.transpose() * b).cwiseQuotient(model.sigma);
}

/// P x with P = V_k V_k^T.
template <typename Derived>
Eigen::VectorXd applyProjection(const ForwardModel& model, const Eigen::MatrixBase<Derived>& x) {
  if (x.size() != model.cols())
    throw std::invalid_argument("applyProjection: expected length " +
                                std::to_string(model.cols()) + ", got " +
                                std::to_string(x.size()));
  return model.V * (model.V.transpose() * x);
}

/// (P + rho I)^{-1} v = (1/rho)(v - P v) + P v / (1 + rho).
template <typename Derived>
Eigen::VectorXd applyShiftedProjectionInverse(const ForwardModel& model, double rho,
                                              const Eigen::MatrixBase<Derived>& v) {
  const Eigen::VectorXd pv = applyProjection(model, v);
  return (v - pv) / rho + pv / (1.0 + rho);
}

/// (A_k^T A_k + rho I)^{-1} v using the retained singular triplets.
template <typename Derived>
Eigen::VectorXd applyShiftedNormalInverse(const ForwardModel& model, double rho,
                                          const Eigen::MatrixBase<Derived>& v) {
  const Eigen::VectorXd coeffs = model.V.transpose() * v;
  const Eigen::VectorXd scaled =
      coeffs.cwiseQuotient((model.sigma.array().square() + rho).matrix());
  return model.V * scaled + (v - model.V * coeffs) / rho;
}

/// Dense P (n x n); intended for small models and diagnostics.
Eigen::MatrixXd projectionMatrix(const ForwardModel& model);

/// argmax_i |[V_k V_k^T e_j]_i| / w_i, ties to the smallest index. 0-based.
int maxPropertyIndex(const ForwardModel& model, int j);

struct WeightReport {
  double min_weight = 0.0;
  int argmin = 0;  // 0-based
};

WeightReport minWeightReport(const ForwardModel& model);

/// Solves (A^T A + gamma I) x = A^T A e_i, the Tikhonov surrogate of P e_i.
Eigen::VectorXd tikhonovProjectionColumn(const Eigen::MatrixXd& A, int i, double gamma);

/// Versioned binary cache ("SRCIDFM1" magic).
void saveModel(const ForwardModel& model, const std::string& path);
ForwardModel loadModel(const std::string& path);
void writeModel(const ForwardModel& model, std::ostream& out);
ForwardModel readModel(std::istream& in);

}  // namespace srcid

#endif  // SRCID_FORWARD_MODEL_HPP
