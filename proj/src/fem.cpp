#include "srcid/fem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace srcid {

TriMesh buildMesh(int nodes_per_side) {
  if (nodes_per_side < 2)
    throw std::invalid_argument("buildMesh: nodes_per_side must be >= 2, got " +
                                std::to_string(nodes_per_side));
  const int n = nodes_per_side;
  const double h = 1.0 / (n - 1);

  TriMesh mesh;
  mesh.nodes_per_side = n;
  mesh.cell_diameter = std::sqrt(2.0) * h;
  mesh.node_coords.reserve(static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      mesh.node_coords.emplace_back(i * h, j * h);
  // Exact endpoints so boundary tests compare against 0 and 1 safely.
  for (auto& p : mesh.node_coords) {
    if (std::abs(p.x() - 1.0) < 1e-14) p.x() = 1.0;
    if (std::abs(p.y() - 1.0) < 1e-14) p.y() = 1.0;
  }

  mesh.triangles.reserve(2 * static_cast<size_t>(n - 1) * (n - 1));
  for (int j = 0; j + 1 < n; ++j) {
    for (int i = 0; i + 1 < n; ++i) {
      const int a = mesh.nodeIndex(i, j);
      const int b = mesh.nodeIndex(i + 1, j);
      const int c = mesh.nodeIndex(i + 1, j + 1);
      const int d = mesh.nodeIndex(i, j + 1);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }

  auto& bnd = mesh.boundary_nodes;
  bnd.reserve(4 * static_cast<size_t>(n - 1));
  for (int i = 0; i < n - 1; ++i) bnd.push_back(mesh.nodeIndex(i, 0));
  for (int j = 0; j < n - 1; ++j) bnd.push_back(mesh.nodeIndex(n - 1, j));
  for (int i = n - 1; i > 0; --i) bnd.push_back(mesh.nodeIndex(i, n - 1));
  for (int j = n - 1; j > 0; --j) bnd.push_back(mesh.nodeIndex(0, j));
  return mesh;
}

bool isNestedRefinement(const TriMesh& coarse, const TriMesh& fine) {
  return fine.nodes_per_side == 2 * coarse.nodes_per_side - 1;
}

Eigen::SparseMatrix<double> prolongation(const TriMesh& coarse, const TriMesh& fine) {
  if (!isNestedRefinement(coarse, fine))
    throw std::invalid_argument("prolongation: fine mesh (" + std::to_string(fine.nodes_per_side) +
                                " per side) is not the nested refinement of coarse mesh (" +
                                std::to_string(coarse.nodes_per_side) + " per side)");
  const int nf = fine.nodes_per_side;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(2) * nf * nf);
  for (int J = 0; J < nf; ++J) {
    for (int I = 0; I < nf; ++I) {
      const int row = fine.nodeIndex(I, J);
      const int i0 = I / 2;
      const int j0 = J / 2;
      const bool odd_i = I % 2 == 1;
      const bool odd_j = J % 2 == 1;
      if (!odd_i && !odd_j) {
        triplets.emplace_back(row, coarse.nodeIndex(i0, j0), 1.0);
      } else if (odd_i && !odd_j) {
        triplets.emplace_back(row, coarse.nodeIndex(i0, j0), 0.5);
        triplets.emplace_back(row, coarse.nodeIndex(i0 + 1, j0), 0.5);
      } else if (!odd_i && odd_j) {
        triplets.emplace_back(row, coarse.nodeIndex(i0, j0), 0.5);
        triplets.emplace_back(row, coarse.nodeIndex(i0, j0 + 1), 0.5);
      } else {
        // Midpoint of the cell diagonal, which is a coarse edge.
        triplets.emplace_back(row, coarse.nodeIndex(i0, j0), 0.5);
        triplets.emplace_back(row, coarse.nodeIndex(i0 + 1, j0 + 1), 0.5);
      }
    }
  }
  Eigen::SparseMatrix<double> R(fine.numNodes(), coarse.numNodes());
  R.setFromTriplets(triplets.begin(), triplets.end());
  return R;
}

}  // namespace srcid
