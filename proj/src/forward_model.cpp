#include "srcid/forward_model.hpp"

#include <Eigen/SVD>
#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace srcid {
namespace {

constexpr std::array<char, 8> kModelMagic = {'S', 'R', 'C', 'I', 'D', 'F', 'M', '1'};
constexpr std::uint32_t kModelVersion = 1;
constexpr double kSingularConditionLimit = 1e12;

// Largest and smallest |eigenvalue| of the symmetric L by power and inverse
// iteration. Deterministic start vector.
double estimateCondition(const Eigen::SparseMatrix<double>& L,
                         const Eigen::SparseLU<Eigen::SparseMatrix<double>>& lu) {
  const Eigen::Index n = L.rows();
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(n, 1.0, 2.0).normalized();
  double lambda_max = 0.0;
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd w = L * v;
    lambda_max = w.norm();
    if (lambda_max == 0.0) return std::numeric_limits<double>::infinity();
    v = w / lambda_max;
  }
  v = Eigen::VectorXd::LinSpaced(n, 1.0, 2.0).normalized();
  double inv_lambda = 0.0;
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd w = lu.solve(v);
    inv_lambda = w.norm();
    if (!std::isfinite(inv_lambda)) return std::numeric_limits<double>::infinity();
    v = w / inv_lambda;
  }
  return lambda_max * inv_lambda;
}

void truncateSvd(ForwardModel& model, int svd_rank) {
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(model.A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  int numerical_rank = 0;
  const double cutoff = s.size() > 0 ? 1e-12 * s[0] : 0.0;
  while (numerical_rank < s.size() && s[numerical_rank] > cutoff) ++numerical_rank;
  if (numerical_rank == 0) throw std::invalid_argument("forward model: matrix is numerically zero");

  int k = svd_rank <= 0 ? numerical_rank : svd_rank;
  if (k > numerical_rank) {
    model.warnings.push_back("requested SVD rank " + std::to_string(k) +
                             " exceeds numerical rank; reduced to " +
                             std::to_string(numerical_rank));
    k = numerical_rank;
  }
  model.requested_rank = svd_rank;
  model.U = svd.matrixU().leftCols(k);
  model.sigma = s.head(k);
  model.V = svd.matrixV().leftCols(k);
  model.weights = model.V.rowwise().norm();
}

template <typename T>
void writePod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T readPod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("model cache: truncated file");
  return value;
}

void writeMatrix(std::ostream& out, const Eigen::MatrixXd& m) {
  writePod<std::int64_t>(out, m.rows());
  writePod<std::int64_t>(out, m.cols());
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * m.size()));
}

Eigen::MatrixXd readMatrix(std::istream& in) {
  const auto rows = readPod<std::int64_t>(in);
  const auto cols = readPod<std::int64_t>(in);
  if (rows < 0 || cols < 0 || rows * cols > (std::int64_t{1} << 31))
    throw std::runtime_error("model cache: corrupt matrix shape");
  Eigen::MatrixXd m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(sizeof(double) * m.size()));
  if (!in) throw std::runtime_error("model cache: truncated matrix data");
  return m;
}

void checkMeshPair(const TriMesh& state_mesh, const TriMesh& source_mesh, const char* who) {
  if (state_mesh.nodes_per_side != source_mesh.nodes_per_side &&
      !isNestedRefinement(source_mesh, state_mesh))
    throw std::invalid_argument(std::string(who) +
                                ": source mesh must equal the state mesh or be its nested "
                                "coarsening");
}

}  // namespace

Eigen::VectorXd applyForward(const TriMesh& state_mesh, const TriMesh& source_mesh,
                             double epsilon, const Eigen::VectorXd& x) {
  checkMeshPair(state_mesh, source_mesh, "applyForward");
  if (x.size() != source_mesh.numNodes())
    throw std::invalid_argument("applyForward: expected " +
                                std::to_string(source_mesh.numNodes()) + " source values");
  const Eigen::SparseMatrix<double> M = assembleMass(state_mesh);
  Eigen::SparseMatrix<double> L = assembleStiffness(state_mesh) + epsilon * M;
  L.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(L);
  if (lu.info() != Eigen::Success)
    throw SingularOperatorError("applyForward: L_eps is singular",
                                std::numeric_limits<double>::infinity());
  const Eigen::VectorXd load = state_mesh.nodes_per_side == source_mesh.nodes_per_side
                                   ? Eigen::VectorXd(M * x)
                                   : Eigen::VectorXd(M * (prolongation(source_mesh, state_mesh) * x));
  const Eigen::VectorXd u = lu.solve(load);
  const Eigen::VectorXd boundary_mass = assembleBoundaryMassDiagonal(state_mesh);
  Eigen::VectorXd b(state_mesh.numBoundaryNodes());
  for (int k = 0; k < b.size(); ++k)
    b[k] = std::sqrt(boundary_mass[k]) * u[state_mesh.boundary_nodes[k]];
  return b;
}

ForwardModel buildForward(const TriMesh& state_mesh, const TriMesh& source_mesh, double epsilon,
                          int svd_rank) {
  checkMeshPair(state_mesh, source_mesh, "buildForward");
  const bool same = state_mesh.nodes_per_side == source_mesh.nodes_per_side;

  const Eigen::SparseMatrix<double> K = assembleStiffness(state_mesh);
  const Eigen::SparseMatrix<double> M = assembleMass(state_mesh);
  Eigen::SparseMatrix<double> L = K + epsilon * M;
  L.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(L);
  if (lu.info() != Eigen::Success)
    throw SingularOperatorError("buildForward: L_eps is singular (eps = " +
                                    std::to_string(epsilon) + ")",
                                std::numeric_limits<double>::infinity());
  const double cond = estimateCondition(L, lu);
  if (!(cond < kSingularConditionLimit)) {
    std::ostringstream msg;
    msg << "buildForward: L_eps is numerically singular (eps = " << epsilon
        << ", condition estimate " << cond << ")";
    throw SingularOperatorError(msg.str(), cond);
  }

  // Rows of L^{-1} at boundary nodes are columns of L^{-1} E_b (L symmetric).
  const int m = state_mesh.numBoundaryNodes();
  Eigen::MatrixXd selector = Eigen::MatrixXd::Zero(state_mesh.numNodes(), m);
  for (int k = 0; k < m; ++k) selector(state_mesh.boundary_nodes[k], k) = 1.0;
  const Eigen::MatrixXd Z = lu.solve(selector);

  Eigen::SparseMatrix<double> load = M;
  if (!same) load = M * prolongation(source_mesh, state_mesh);

  ForwardModel model;
  const Eigen::VectorXd boundary_mass = assembleBoundaryMassDiagonal(state_mesh);
  model.A = boundary_mass.cwiseSqrt().asDiagonal() * (load.transpose() * Z).transpose();
  model.epsilon = epsilon;
  model.state_nodes_per_side = state_mesh.nodes_per_side;
  model.source_nodes_per_side = source_mesh.nodes_per_side;
  model.condition_estimate = cond;
  truncateSvd(model, svd_rank);
  return model;
}

ForwardModel modelFromMatrix(Eigen::MatrixXd A, int svd_rank) {
  ForwardModel model;
  model.A = std::move(A);
  model.epsilon = 0.0;
  truncateSvd(model, svd_rank);
  return model;
}

Eigen::MatrixXd projectionMatrix(const ForwardModel& model) {
  return model.V * model.V.transpose();
}

int maxPropertyIndex(const ForwardModel& model, int j) {
  if (j < 0 || j >= model.cols())
    throw std::out_of_range("maxPropertyIndex: column index out of range");
  if ((model.weights.array() <= 0.0).any())
    throw std::invalid_argument("maxPropertyIndex: all weights must be positive");
  const Eigen::VectorXd column = model.V * model.V.row(j).transpose();
  const Eigen::VectorXd scaled = column.cwiseAbs().cwiseQuotient(model.weights);
  int best = 0;
  for (int i = 1; i < scaled.size(); ++i)
    if (scaled[i] > scaled[best]) best = i;
  return best;
}

WeightReport minWeightReport(const ForwardModel& model) {
  WeightReport report;
  report.min_weight = model.weights.minCoeff(&report.argmin);
  return report;
}

Eigen::VectorXd tikhonovProjectionColumn(const Eigen::MatrixXd& A, int i, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("tikhonovProjectionColumn: gamma must be > 0");
  if (i < 0 || i >= A.cols()) throw std::out_of_range("tikhonovProjectionColumn: bad column");
  // Same minimizer as the normal equations, through the stacked least-squares
  // form [A; sqrt(gamma) I] x = [A e_i; 0], which squares no condition number.
  const Eigen::Index m = A.rows(), n = A.cols();
  Eigen::MatrixXd stacked(m + n, n);
  stacked << A, std::sqrt(gamma) * Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + n);
  rhs.head(m) = A.col(i);
  return stacked.householderQr().solve(rhs);
}

void writeModel(const ForwardModel& model, std::ostream& out) {
  out.write(kModelMagic.data(), kModelMagic.size());
  writePod(out, kModelVersion);
  writePod(out, model.epsilon);
  writePod<std::int32_t>(out, model.state_nodes_per_side);
  writePod<std::int32_t>(out, model.source_nodes_per_side);
  writePod<std::int32_t>(out, model.requested_rank);
  writePod(out, model.condition_estimate);
  writeMatrix(out, model.A);
  writeMatrix(out, model.U);
  writeMatrix(out, model.sigma);
  writeMatrix(out, model.V);
  writeMatrix(out, model.weights);
  if (!out) throw std::runtime_error("model cache: write failed");
}

ForwardModel readModel(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kModelMagic) throw std::runtime_error("model cache: bad magic header");
  const auto version = readPod<std::uint32_t>(in);
  if (version != kModelVersion)
    throw std::runtime_error("model cache: unsupported version " + std::to_string(version));
  ForwardModel model;
  model.epsilon = readPod<double>(in);
  model.state_nodes_per_side = readPod<std::int32_t>(in);
  model.source_nodes_per_side = readPod<std::int32_t>(in);
  model.requested_rank = readPod<std::int32_t>(in);
  model.condition_estimate = readPod<double>(in);
  model.A = readMatrix(in);
  model.U = readMatrix(in);
  model.sigma = readMatrix(in);
  model.V = readMatrix(in);
  model.weights = readMatrix(in);
  const Eigen::Index k = model.sigma.size();
  if (model.U.rows() != model.A.rows() || model.U.cols() != k || model.V.rows() != model.A.cols() ||
      model.V.cols() != k || model.weights.size() != model.A.cols())
    throw std::runtime_error("model cache: inconsistent shapes");
  return model;
}

void saveModel(const ForwardModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  writeModel(model, out);
}

ForwardModel loadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return readModel(in);
}

}  // namespace srcid
