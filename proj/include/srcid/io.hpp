#ifndef SRCID_IO_HPP
#define SRCID_IO_HPP

#include "srcid/fem.hpp"

#include <Eigen/Dense>

#include <string>

namespace srcid {

/// One value per line with 17 significant digits, so re-reading is exact.
void writeVectorCsv(const Eigen::VectorXd& x, const std::string& path,
                    const std::string& header = "value");
/// Reads the last column of a CSV with a single header line.
Eigen::VectorXd readVectorCsv(const std::string& path);

/// CSV with columns node_index,x_coord,y_coord,value.
void writeNodalCsv(const Eigen::VectorXd& x, const TriMesh& mesh, const std::string& path);

/// 8-bit binary graymap of the nodal grid, top row at y = 1. Values map
/// linearly from [0, max(x, 1e-15)] to [0, 255].
void writeHeatmapPgm(const Eigen::VectorXd& x, const TriMesh& mesh, const std::string& path);

/// Writes <stem>.csv and <stem>.pgm.
void exportHeatmap(const Eigen::VectorXd& x, const TriMesh& mesh, const std::string& stem);

}  // namespace srcid

#endif  // SRCID_IO_HPP
