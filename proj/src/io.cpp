#include "srcid/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>
#include <vector>

namespace srcid {
namespace {

std::ofstream openForWrite(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

void checkLength(const Eigen::VectorXd& x, const TriMesh& mesh, const char* who) {
  if (x.size() != mesh.numNodes())
    throw std::invalid_argument(std::string(who) + ": expected " +
                                std::to_string(mesh.numNodes()) + " nodal values");
}

}  // namespace

void writeVectorCsv(const Eigen::VectorXd& x, const std::string& path, const std::string& header) {
  std::ofstream out = openForWrite(path);
  out << std::setprecision(17) << header << '\n';
  for (Eigen::Index i = 0; i < x.size(); ++i) out << x[i] << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

Eigen::VectorXd readVectorCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find_last_of(',');
    const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
    values.push_back(std::stod(field));
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void writeNodalCsv(const Eigen::VectorXd& x, const TriMesh& mesh, const std::string& path) {
  checkLength(x, mesh, "writeNodalCsv");
  std::ofstream out = openForWrite(path);
  out << std::setprecision(17) << "node_index,x_coord,y_coord,value\n";
  for (int i = 0; i < mesh.numNodes(); ++i)
    out << i << ',' << mesh.node_coords[i].x() << ',' << mesh.node_coords[i].y() << ',' << x[i]
        << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

void writeHeatmapPgm(const Eigen::VectorXd& x, const TriMesh& mesh, const std::string& path) {
  checkLength(x, mesh, "writeHeatmapPgm");
  const int n = mesh.nodes_per_side;
  const double top = std::max(x.size() ? x.maxCoeff() : 0.0, 1e-15);
  std::vector<unsigned char> pixels(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r) {
    const int j = n - 1 - r;
    for (int i = 0; i < n; ++i) {
      const double v = std::clamp(x[mesh.nodeIndex(i, j)] / top, 0.0, 1.0);
      pixels[static_cast<std::size_t>(r) * n + i] = static_cast<unsigned char>(std::lround(255.0 * v));
    }
  }
  std::ofstream out = openForWrite(path, std::ios::out | std::ios::binary);
  out << "P5\n" << n << ' ' << n << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

void exportHeatmap(const Eigen::VectorXd& x, const TriMesh& mesh, const std::string& stem) {
  writeNodalCsv(x, mesh, stem + ".csv");
  writeHeatmapPgm(x, mesh, stem + ".pgm");
}

}  // namespace srcid
