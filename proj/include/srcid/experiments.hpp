// Scenario library: source shapes, data generation, example pipelines and
// recovery metrics.
#ifndef SRCID_EXPERIMENTS_HPP
#define SRCID_EXPERIMENTS_HPP

#include "srcid/admm.hpp"
#include "srcid/fem.hpp"
#include "srcid/forward_model.hpp"
#include "srcid/strength_sweep.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace srcid {

enum class ShapeKind { Points, Rectangle, Disk, Horseshoe, HollowRectangle };

/// Geometry in unit-square coordinates. Fields unused by a kind are ignored.
struct Shape {
  ShapeKind kind = ShapeKind::Rectangle;
  double strength = 1.0;
  std::vector<Eigen::Vector2d> points;  // Points
  // Rectangle and HollowRectangle: [x0, x1] x [y0, y1].
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  // HollowRectangle frame width.
  double thickness = 0.0;
  // Disk and Horseshoe. The horseshoe is the annulus inner <= r <= radius
  // with the sector of half-angle gap_half_angle around -y removed.
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0.0;
  double inner_radius = 0.0;
  double gap_half_angle = 0.0;

  static Shape pointSet(std::vector<Eigen::Vector2d> pts, double strength = 1.0);
  static Shape rectangle(double x0, double y0, double x1, double y1, double strength = 1.0);
  static Shape disk(Eigen::Vector2d center, double radius, double strength = 1.0);
  static Shape horseshoe(Eigen::Vector2d center, double inner_radius, double outer_radius,
                         double gap_half_angle, double strength = 1.0);
  static Shape hollowRectangle(double x0, double y0, double x1, double y1, double thickness,
                               double strength = 1.0);
};

struct SourceSpec {
  std::vector<Shape> shapes;
};

/// Throws std::invalid_argument when a shape leaves the unit square or has a
/// non-positive strength.
void validate(const SourceSpec& spec);

/// Nodal coefficients: the shape's strength at nodes inside it (boundary
/// inclusive), point sources snapped to the nearest node. Overlaps take the
/// larger strength. Throws std::invalid_argument on an empty support.
Eigen::VectorXd rasterizeSource(const SourceSpec& spec, const TriMesh& mesh);

struct NoiseSpec {
  double level = 0.0;  // tau / (max b - min b)
  std::uint64_t seed = 0;
};

struct GeneratedData {
  Eigen::VectorXd clean;
  Eigen::VectorXd noisy;
  double tau = 0.0;
};

/// Gaussian noise of standard deviation tau = level * (max b - min b).
GeneratedData addNoise(const Eigen::VectorXd& clean, const NoiseSpec& noise);

/// Boundary data of the coarse model sampled from fine boundary data at the
/// shared nodes, rescaled by sqrt(mb_coarse / mb_fine) so the boundary mass
/// weighting matches the coarse model. Throws unless fine refines coarse.
Eigen::VectorXd restrictBoundaryData(const Eigen::VectorXd& fine_data, const TriMesh& fine,
                                     const TriMesh& coarse);

/// Clean data on `inverse_mesh`'s boundary. When the data mesh is finer the
/// source is rasterized and solved there, then restricted; otherwise the
/// source is rasterized on `inverse_mesh`'s source grid and mapped by the
/// inverse model's own operator.
Eigen::VectorXd generateData(const SourceSpec& spec, const TriMesh& data_mesh,
                             const TriMesh& inverse_state_mesh, double epsilon);

struct RecoveryReport {
  double support_precision = 0.0;
  double support_recall = 0.0;
  int support_size = 0;
  int true_support_size = 0;
  double linf_error = 0.0;
  double l2_error = 0.0;
  double weighted_l1 = 0.0;
  double misfit = 0.0;
  double runtime_seconds = 0.0;
  std::vector<std::pair<std::string, std::string>> parameters;
};

inline constexpr double kDefaultThresholdFrac = 0.1;

/// Support of x is {i : x_i > frac * max(x)}. An all-zero x has empty support
/// and precision 1 by convention.
RecoveryReport computeMetrics(const Eigen::VectorXd& x, const Eigen::VectorXd& x_star,
                              double threshold_frac = kDefaultThresholdFrac);

/// Indices with x_i > threshold.
std::vector<int> supportOf(const Eigen::VectorXd& x, double threshold);

enum class StrengthChoice { Fixed, Sweep };

struct ExampleConfig {
  std::string name = "ex1";
  double epsilon = -1.0;
  double alpha = 0.0;  // <= 0 selects referenceAlpha(name, noise_level)
  double s = kUnbounded;
  StrengthChoice strength_choice = StrengthChoice::Fixed;
  std::vector<double> sweep_grid;  // empty selects defaultStrengthGrid
  int rank = kDefaultSvdRank;
  int iters = 5000;
  std::uint64_t seed = 1;
  double noise_level = 0.0;
  bool morozov = false;
  bool identity_weights = false;
  ObjectiveMode mode = ObjectiveMode::Projected;
  int state_nodes = 33;
  int source_nodes = 17;
  int data_nodes = 33;  // > state_nodes means crime-free data
  double threshold_frac = kDefaultThresholdFrac;
  std::string out_dir;  // empty: no artifacts
  SourceSpec source;
};

/// Defaults for ex1, ex1mag, ex2, ex3, ex4, ex5. Throws std::invalid_argument
/// for other names.
ExampleConfig exampleDefaults(const std::string& name);
std::vector<std::string> exampleNames();

/// Regularization weight used with each example and noise level: 1e-4
/// without noise, fixed per-level reference values for ex4 and ex5 otherwise.
double referenceAlpha(const std::string& name, double noise_level);

/// Flat "key = value" overrides. Recognized keys mirror the CLI flags plus
/// `shape` lines such as "shape = rectangle 0.2 0.2 0.4 0.5 1.0" that replace
/// the default source. Throws std::invalid_argument on unknown keys.
void applyConfigText(ExampleConfig& config, const std::string& text);
void applyConfigFile(ExampleConfig& config, const std::string& path);
void applyOverride(ExampleConfig& config, const std::string& key, const std::string& value);

/// Parses one shape description (kind followed by numbers).
Shape parseShape(const std::string& text);

struct ExampleOutcome {
  ExampleConfig config;
  RecoveryReport report;
  TriMesh source_mesh;
  Eigen::VectorXd x;
  Eigen::VectorXd x_star;
  Eigen::VectorXd b;
  double s_used = kUnbounded;
  double alpha_used = 0.0;
  double tau = 0.0;
  bool converged = false;
  int iterations = 0;
  std::optional<SweepResult> sweep;
  std::optional<MorozovResult> morozov;
  std::vector<std::string> artifacts;
  std::vector<std::string> warnings;
};

ExampleOutcome runExample(const ExampleConfig& config);

/// Writes solution and true-source CSVs and heatmaps, the boundary data, the
/// sweep CSV and the report into config.out_dir.
std::vector<std::string> writeArtifacts(const ExampleOutcome& outcome);

/// Flat text form of a report ("key = value" lines).
std::string formatReport(const RecoveryReport& report);

}  // namespace srcid

#endif  // SRCID_EXPERIMENTS_HPP
