#include "srcid/forward_model.hpp"

#include <gtest/gtest.h>

#include <Eigen/SVD>

#include <cmath>
#include <random>
#include <sstream>

using namespace srcid;

namespace {

// Dense reference assembly built from coordinates alone.
struct DenseOracle {
  Eigen::MatrixXd K, M;
};

DenseOracle denseAssembly(const TriMesh& mesh) {
  const int n = mesh.numNodes();
  DenseOracle o{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  for (const auto& t : mesh.triangles) {
    const auto& a = mesh.node_coords[t[0]];
    const auto& b = mesh.node_coords[t[1]];
    const auto& c = mesh.node_coords[t[2]];
    const double area2 = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
    const double area = 0.5 * std::abs(area2);
    // grad of barycentric k is the rotated opposite edge over 2T.
    Eigen::Matrix<double, 2, 3> g;
    const Eigen::Vector2d* p[3] = {&a, &b, &c};
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector2d& q1 = *p[(k + 1) % 3];
      const Eigen::Vector2d& q2 = *p[(k + 2) % 3];
      g(0, k) = (q1.y() - q2.y()) / area2;
      g(1, k) = (q2.x() - q1.x()) / area2;
    }
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s) {
        o.K(t[r], t[s]) += area * g.col(r).dot(g.col(s));
        o.M(t[r], t[s]) += area * (r == s ? 2.0 : 1.0) / 12.0;
      }
  }
  return o;
}

// Value at p of the P1 hat function of coarse node `node`.
double hatValue(const TriMesh& mesh, int node, const Eigen::Vector2d& p) {
  for (const auto& t : mesh.triangles) {
    Eigen::Matrix3d T;
    for (int k = 0; k < 3; ++k) T.col(k) << mesh.node_coords[t[k]], 1.0;
    const Eigen::Vector3d lam = T.fullPivLu().solve(Eigen::Vector3d(p.x(), p.y(), 1.0));
    if ((lam.array() >= -1e-12).all()) {
      for (int k = 0; k < 3; ++k)
        if (t[k] == node) return lam[k];
      return 0.0;
    }
  }
  return 0.0;
}

Eigen::MatrixXd denseForward(const TriMesh& state, const TriMesh& source, double eps) {
  const DenseOracle o = denseAssembly(state);
  Eigen::MatrixXd R(state.numNodes(), source.numNodes());
  for (int f = 0; f < state.numNodes(); ++f)
    for (int c = 0; c < source.numNodes(); ++c) R(f, c) = hatValue(source, c, state.node_coords[f]);
  const Eigen::MatrixXd L = o.K + eps * o.M;
  const Eigen::MatrixXd U = L.fullPivLu().solve(o.M * R);
  Eigen::MatrixXd A(state.numBoundaryNodes(), source.numNodes());
  const double h = state.spacing();
  for (int k = 0; k < state.numBoundaryNodes(); ++k)
    A.row(k) = std::sqrt(h) * U.row(state.boundary_nodes[k]);
  return A;
}

Eigen::MatrixXd randomMatrix(int m, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::MatrixXd A(m, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) A(i, j) = N(rng);
  return A;
}

Eigen::MatrixXd fullPinv(const Eigen::MatrixXd& A) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.solve(Eigen::MatrixXd::Identity(A.rows(), A.rows()));
}

}  // namespace

TEST(BuildForward, MatchesDenseOracleSameGrid) {
  const TriMesh m = buildMesh(5);
  for (double eps : {1.0, -1.0}) {
    const ForwardModel model = buildForward(m, m, eps, 0);
    const Eigen::MatrixXd ref = denseForward(m, m, eps);
    EXPECT_LT((model.A - ref).cwiseAbs().maxCoeff(), 1e-12 * ref.cwiseAbs().maxCoeff());
  }
}

TEST(BuildForward, MatchesDenseOracleTwoGrid) {
  const TriMesh state = buildMesh(9);
  const TriMesh source = buildMesh(5);
  const ForwardModel model = buildForward(state, source, 1.0, 0);
  ASSERT_EQ(model.rows(), 32);
  ASSERT_EQ(model.cols(), 25);
  const Eigen::MatrixXd ref = denseForward(state, source, 1.0);
  EXPECT_LT((model.A - ref).cwiseAbs().maxCoeff(), 1e-12 * ref.cwiseAbs().maxCoeff());
}

TEST(BuildForward, PaperGridShapes) {
  const ForwardModel model = buildForward(buildMesh(33), buildMesh(17), -1.0);
  EXPECT_EQ(model.rows(), 128);
  EXPECT_EQ(model.cols(), 289);
  EXPECT_EQ(model.rank(), 20);
  EXPECT_EQ(model.state_nodes_per_side, 33);
  EXPECT_EQ(model.source_nodes_per_side, 17);
  EXPECT_TRUE(model.sigma.allFinite());
  for (int i = 1; i < model.rank(); ++i) EXPECT_GE(model.sigma[i - 1], model.sigma[i]);
}

TEST(BuildForward, PureNeumannIsSingular) {
  const TriMesh m = buildMesh(9);
  EXPECT_THROW(buildForward(m, m, 0.0), SingularOperatorError);
}

TEST(BuildForward, RejectsUnnestedSource) {
  EXPECT_THROW(buildForward(buildMesh(9), buildMesh(4), 1.0), std::invalid_argument);
}

TEST(BuildForward, Deterministic) {
  const TriMesh state = buildMesh(17);
  const TriMesh source = buildMesh(9);
  const ForwardModel a = buildForward(state, source, 1.0);
  const ForwardModel b = buildForward(state, source, 1.0);
  EXPECT_TRUE((a.A.array() == b.A.array()).all());
  EXPECT_TRUE((a.V.array() == b.V.array()).all());
}

TEST(BuildForward, SvdFactorsAreOrthonormal) {
  const ForwardModel model = buildForward(buildMesh(17), buildMesh(9), -1.0);
  const int k = model.rank();
  EXPECT_LT((model.U.transpose() * model.U - Eigen::MatrixXd::Identity(k, k)).norm(), 1e-10);
  EXPECT_LT((model.V.transpose() * model.V - Eigen::MatrixXd::Identity(k, k)).norm(), 1e-10);
  EXPECT_LT((model.weights - model.V.rowwise().norm()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(model.weights.maxCoeff(), 1.0 + 1e-10);
  // w_i = ||P e_i|| through the dense projection.
  const Eigen::MatrixXd P = projectionMatrix(model);
  for (int i = 0; i < model.cols(); i += 7)
    EXPECT_NEAR(P.col(i).norm(), model.weights[i], 1e-12);
}

TEST(ApplyForward, AgreesWithAssembledMatrix) {
  const TriMesh state = buildMesh(17);
  const TriMesh source = buildMesh(9);
  const ForwardModel model = buildForward(state, source, -1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Eigen::VectorXd x(model.cols());
  for (auto& v : x) v = U(rng);
  const Eigen::VectorXd direct = applyForward(state, source, -1.0, x);
  EXPECT_LT((direct - model.A * x).cwiseAbs().maxCoeff(), 1e-12 * direct.cwiseAbs().maxCoeff());
}

TEST(Pinv, ZeroAndSingularVectors) {
  std::mt19937_64 rng(11);
  const ForwardModel model = modelFromMatrix(randomMatrix(6, 8, rng));
  EXPECT_EQ(applyPinv(model, Eigen::VectorXd::Zero(6)).norm(), 0.0);
  for (int j = 0; j < model.rank(); ++j) {
    const Eigen::VectorXd b = model.U.col(j) * model.sigma[j];
    EXPECT_LT((applyPinv(model, b) - model.V.col(j)).norm(), 1e-12);
  }
  EXPECT_THROW(applyPinv(model, Eigen::VectorXd::Zero(5)), std::invalid_argument);
}

TEST(Pinv, MatchesLeastSquaresOnRange) {
  std::mt19937_64 rng(12);
  const Eigen::MatrixXd A = randomMatrix(6, 8, rng);
  const ForwardModel model = modelFromMatrix(A);
  ASSERT_EQ(model.rank(), 6);
  const Eigen::VectorXd x = model.V * Eigen::VectorXd::LinSpaced(6, -1.0, 2.0);
  const Eigen::VectorXd b = A * x;
  EXPECT_LT((applyPinv(model, b) - x).norm(), 1e-8);
  // Minimum-norm least squares through a complete orthogonal decomposition.
  const Eigen::VectorXd ls = A.completeOrthogonalDecomposition().solve(b);
  EXPECT_LT((applyPinv(model, b) - ls).norm(), 1e-8);
}

TEST(Pinv, RightInverseOnRetainedRange) {
  const ForwardModel model = buildForward(buildMesh(17), buildMesh(9), 1.0);
  Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(model.rows(), -1.0, 1.0).array().sin();
  const Eigen::VectorXd b_range = model.U * (model.U.transpose() * b);
  const Eigen::VectorXd Ak_pinv = (model.U * model.sigma.asDiagonal() * model.V.transpose()) *
                                  applyPinv(model, b);
  EXPECT_LT((Ak_pinv - b_range).norm(), 1e-8);
}

TEST(Projection, RangeComplementAndIdempotence) {
  std::mt19937_64 rng(5);
  const ForwardModel model = modelFromMatrix(randomMatrix(5, 9, rng));
  const Eigen::VectorXd in_range = model.V * Eigen::VectorXd::Ones(model.rank());
  EXPECT_LT((applyProjection(model, in_range) - in_range).norm(), 1e-10);

  Eigen::VectorXd x = randomMatrix(9, 1, rng);
  const Eigen::VectorXd perp = x - model.V * (model.V.transpose() * x);
  EXPECT_LT(applyProjection(model, perp).norm(), 1e-10);

  const Eigen::VectorXd px = applyProjection(model, x);
  EXPECT_LT((applyProjection(model, px) - px).norm(), 1e-10);
  EXPECT_LE(px.norm(), x.norm() + 1e-12);
  const Eigen::MatrixXd P = projectionMatrix(model);
  EXPECT_LT((P - P.transpose()).norm(), 1e-12);
  EXPECT_THROW(applyProjection(model, Eigen::VectorXd::Zero(4)), std::invalid_argument);
}

TEST(Projection, ShiftedInversesMatchDenseSolves) {
  std::mt19937_64 rng(6);
  const Eigen::MatrixXd A = randomMatrix(5, 9, rng);
  const ForwardModel model = modelFromMatrix(A);
  const Eigen::VectorXd v = randomMatrix(9, 1, rng);
  const double rho = 0.37;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(9, 9);
  const Eigen::VectorXd ref_p = (projectionMatrix(model) + rho * I).lu().solve(v);
  EXPECT_LT((applyShiftedProjectionInverse(model, rho, v) - ref_p).norm(), 1e-10);
  const Eigen::VectorXd ref_n = (A.transpose() * A + rho * I).lu().solve(v);
  EXPECT_LT((applyShiftedNormalInverse(model, rho, v) - ref_n).norm(), 1e-10);
}

TEST(MaxProperty, OrthogonalMatrix) {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd Q = randomMatrix(6, 6, rng).householderQr().householderQ();
  const ForwardModel model = modelFromMatrix(Q);
  EXPECT_LT((model.weights.array() - 1.0).abs().maxCoeff(), 1e-12);
  for (int j = 0; j < 6; ++j) EXPECT_EQ(maxPropertyIndex(model, j), j);
  const WeightReport wr = minWeightReport(model);
  EXPECT_NEAR(wr.min_weight, 1.0, 1e-12);
}

TEST(MaxProperty, RandomFullSvdMatrix) {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXd A = randomMatrix(8, 12, rng);
  const ForwardModel model = modelFromMatrix(A);
  // Oracle: |[A^+ A e_j]_i| / ||A^+ A e_i|| maximal at i = j.
  const Eigen::MatrixXd P = fullPinv(A) * A;
  for (int j = 0; j < 12; ++j) {
    Eigen::Index best = 0;
    (P.col(j).cwiseAbs().array() / P.colwise().norm().transpose().array()).maxCoeff(&best);
    EXPECT_EQ(best, j);
    EXPECT_EQ(maxPropertyIndex(model, j), j);
  }
}

TEST(MaxProperty, TruncatedPaperModelLogged) {
  const ForwardModel model = buildForward(buildMesh(33), buildMesh(17), 1.0);
  int hits = 0;
  for (int j = 0; j < model.cols(); ++j) hits += maxPropertyIndex(model, j) == j;
  RecordProperty("max_property_hits", hits);
  std::cout << "[diagnostic] rank-20 max-property holds for " << hits << " of " << model.cols()
            << " columns\n";
  SUCCEED();
}

TEST(MinWeight, FlagsNearNullColumn) {
  // Column 3 is a tiny multiple of column 0, so e_3 is nearly in the null
  // space and its projection is short.
  Eigen::MatrixXd A(3, 4);
  A << 1, 0, 0, 1e-4,
       0, 1, 0, 0,
       0, 0, 1, 0;
  const ForwardModel model = modelFromMatrix(A);
  const Eigen::MatrixXd P = fullPinv(A) * A;
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(model.weights[i], P.col(i).norm(), 1e-12);
  const WeightReport wr = minWeightReport(model);
  EXPECT_EQ(wr.argmin, 3);
  EXPECT_LT(wr.min_weight, 1e-3);
}

TEST(Tikhonov, OrthonormalColumnsAndConvergence) {
  std::mt19937_64 rng(9);
  const Eigen::MatrixXd Q = randomMatrix(7, 4, rng).householderQr().householderQ() *
                            Eigen::MatrixXd::Identity(7, 4);
  const Eigen::VectorXd x = tikhonovProjectionColumn(Q, 2, 0.5);
  EXPECT_LT((x - Eigen::VectorXd::Unit(4, 2) / 1.5).norm(), 1e-12);

  const Eigen::MatrixXd A = randomMatrix(6, 8, rng);
  const Eigen::MatrixXd P = fullPinv(A) * A;
  double previous = std::numeric_limits<double>::infinity();
  for (double gamma : {1e-2, 1e-4, 1e-6}) {
    const double err = (tikhonovProjectionColumn(A, 1, gamma) - P.col(1)).norm();
    EXPECT_LT(err, previous);
    previous = err;
  }
  EXPECT_LE((tikhonovProjectionColumn(A, 1, 1e-10) - P.col(1)).norm(), 1e-6);
  EXPECT_LE(tikhonovProjectionColumn(A, 1, 1e3).norm(), P.col(1).norm());
  EXPECT_THROW(tikhonovProjectionColumn(A, 1, 0.0), std::invalid_argument);
}

TEST(ModelCache, RoundTrip) {
  const ForwardModel model = buildForward(buildMesh(9), buildMesh(5), -1.0, 10);
  std::stringstream buffer;
  writeModel(model, buffer);
  const ForwardModel back = readModel(buffer);
  EXPECT_TRUE((back.A.array() == model.A.array()).all());
  EXPECT_TRUE((back.V.array() == model.V.array()).all());
  EXPECT_TRUE((back.weights.array() == model.weights.array()).all());
  EXPECT_EQ(back.epsilon, -1.0);
  EXPECT_EQ(back.state_nodes_per_side, 9);
  EXPECT_EQ(back.rank(), 10);

  std::stringstream bad("NOTAMODEL");
  EXPECT_THROW(readModel(bad), std::runtime_error);
}

TEST(ModelFromMatrix, RankReduction) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4, 5);
  A(0, 0) = 2.0;
  A(1, 1) = 1.0;
  const ForwardModel model = modelFromMatrix(A, 4);
  EXPECT_EQ(model.rank(), 2);
  EXPECT_FALSE(model.warnings.empty());
}
