// Structured P1 finite elements on the unit square.
//
// Node (i, j) sits at (i*h, j*h) with index j*n + i. Every square cell is
// split along its lower-left to upper-right diagonal into two
// counter-clockwise triangles, so meshes with n and 2n-1 nodes per side are
// nested.
#ifndef SRCID_FEM_HPP
#define SRCID_FEM_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <vector>

namespace srcid {

struct TriMesh {
  int nodes_per_side = 0;
  std::vector<Eigen::Vector2d> node_coords;
  std::vector<std::array<int, 3>> triangles;
  // Counter-clockwise walk of the boundary starting at the origin.
  std::vector<int> boundary_nodes;
  double cell_diameter = 0.0;

  int numNodes() const { return static_cast<int>(node_coords.size()); }
  int numBoundaryNodes() const { return static_cast<int>(boundary_nodes.size()); }
  double spacing() const { return 1.0 / (nodes_per_side - 1); }
  int nodeIndex(int i, int j) const { return j * nodes_per_side + i; }
};

TriMesh buildMesh(int nodes_per_side);

/// True when `fine` has 2n-1 nodes per side for `coarse` with n.
bool isNestedRefinement(const TriMesh& coarse, const TriMesh& fine);

namespace detail {

// Gradients of the three barycentric functions and the triangle area.
inline void p1Gradients(const TriMesh& mesh, const std::array<int, 3>& tri,
                        Eigen::Matrix<double, 2, 3>& grads, double& area) {
  const Eigen::Vector2d& p0 = mesh.node_coords[tri[0]];
  const Eigen::Vector2d& p1 = mesh.node_coords[tri[1]];
  const Eigen::Vector2d& p2 = mesh.node_coords[tri[2]];
  Eigen::Matrix2d jac;
  jac.col(0) = p1 - p0;
  jac.col(1) = p2 - p0;
  area = 0.5 * jac.determinant();
  Eigen::Matrix<double, 2, 3> ref;
  ref << -1, 1, 0,
         -1, 0, 1;
  grads = jac.inverse().transpose() * ref;
}

}  // namespace detail

/// Pure Neumann Laplacian: K_ij = ∫ ∇ψ_i · ∇ψ_j.
template <typename Scalar = double>
Eigen::SparseMatrix<Scalar> assembleStiffness(const TriMesh& mesh) {
  std::vector<Eigen::Triplet<Scalar>> triplets;
  triplets.reserve(mesh.triangles.size() * 9);
  Eigen::Matrix<double, 2, 3> grads;
  double area = 0.0;
  for (const auto& tri : mesh.triangles) {
    detail::p1Gradients(mesh, tri, grads, area);
    const Eigen::Matrix3d local = area * grads.transpose() * grads;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        triplets.emplace_back(tri[a], tri[b], static_cast<Scalar>(local(a, b)));
  }
  Eigen::SparseMatrix<Scalar> K(mesh.numNodes(), mesh.numNodes());
  K.setFromTriplets(triplets.begin(), triplets.end());
  K.prune(Scalar(0));
  return K;
}

/// Consistent mass matrix; element block is (T/12)[[2,1,1],[1,2,1],[1,1,2]].
template <typename Scalar = double>
Eigen::SparseMatrix<Scalar> assembleMass(const TriMesh& mesh) {
  std::vector<Eigen::Triplet<Scalar>> triplets;
  triplets.reserve(mesh.triangles.size() * 9);
  Eigen::Matrix<double, 2, 3> grads;
  double area = 0.0;
  for (const auto& tri : mesh.triangles) {
    detail::p1Gradients(mesh, tri, grads, area);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        triplets.emplace_back(tri[a], tri[b],
                              static_cast<Scalar>(area / 12.0 * (a == b ? 2.0 : 1.0)));
  }
  Eigen::SparseMatrix<Scalar> M(mesh.numNodes(), mesh.numNodes());
  M.setFromTriplets(triplets.begin(), triplets.end());
  return M;
}

/// Lumped boundary mass, one entry per boundary node in `boundary_nodes`
/// order: each node owns half of every adjacent boundary edge.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> assembleBoundaryMassDiagonal(const TriMesh& mesh) {
  const int m = mesh.numBoundaryNodes();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> diag = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(m);
  // The boundary walk is closed: edge k joins entries k and k+1 (mod m).
  for (int k = 0; k < m; ++k) {
    const int next = (k + 1) % m;
    const double len =
        (mesh.node_coords[mesh.boundary_nodes[k]] - mesh.node_coords[mesh.boundary_nodes[next]]).norm();
    diag[k] += static_cast<Scalar>(0.5 * len);
    diag[next] += static_cast<Scalar>(0.5 * len);
  }
  return diag;
}

/// Boundary mass as an m x m diagonal matrix (m = boundary node count).
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> assembleBoundaryMass(const TriMesh& mesh) {
  return assembleBoundaryMassDiagonal<Scalar>(mesh).asDiagonal();
}

/// Values of the coarse hat functions at the fine nodes (fine-n x coarse-n).
/// Throws std::invalid_argument unless `fine` is the nested refinement of
/// `coarse`.
Eigen::SparseMatrix<double> prolongation(const TriMesh& coarse, const TriMesh& fine);

}  // namespace srcid

#endif  // SRCID_FEM_HPP
