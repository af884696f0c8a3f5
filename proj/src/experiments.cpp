#include "srcid/experiments.hpp"

#include "srcid/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace srcid {
namespace {

constexpr double kGeomTol = 1e-9;

bool insideUnitSquare(double x, double y) {
  return x >= -kGeomTol && x <= 1.0 + kGeomTol && y >= -kGeomTol && y <= 1.0 + kGeomTol;
}

bool inBox(const Eigen::Vector2d& p, double x0, double y0, double x1, double y1) {
  return p.x() >= x0 - kGeomTol && p.x() <= x1 + kGeomTol && p.y() >= y0 - kGeomTol &&
         p.y() <= y1 + kGeomTol;
}

bool contains(const Shape& shape, const Eigen::Vector2d& p) {
  switch (shape.kind) {
    case ShapeKind::Points:
      return false;
    case ShapeKind::Rectangle:
      return inBox(p, shape.x0, shape.y0, shape.x1, shape.y1);
    case ShapeKind::Disk:
      return (p - shape.center).norm() <= shape.radius + kGeomTol;
    case ShapeKind::Horseshoe: {
      const Eigen::Vector2d d = p - shape.center;
      const double r = d.norm();
      if (r < shape.inner_radius - kGeomTol || r > shape.radius + kGeomTol) return false;
      // Angle measured from the downward direction.
      const double angle = std::atan2(d.x(), -d.y());
      return std::abs(angle) >= shape.gap_half_angle - kGeomTol;
    }
    case ShapeKind::HollowRectangle: {
      if (!inBox(p, shape.x0, shape.y0, shape.x1, shape.y1)) return false;
      const double t = shape.thickness;
      // Strictly inside the inner box means inside the hole.
      return !(p.x() > shape.x0 + t + kGeomTol && p.x() < shape.x1 - t - kGeomTol &&
               p.y() > shape.y0 + t + kGeomTol && p.y() < shape.y1 - t - kGeomTol);
    }
  }
  return false;
}

double parseDouble(const std::string& key, const std::string& value) {
  if (value == "inf" || value == "infinity") return kUnbounded;
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for " + key + ": '" + value + "'");
  }
}

int parseInt(const std::string& key, const std::string& value) {
  const double v = parseDouble(key, value);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw std::invalid_argument("config: expected an integer for " + key);
  return static_cast<int>(v);
}

bool parseBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw std::invalid_argument("config: expected a boolean for " + key);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string formatDouble(double v) {
  std::ostringstream out;
  out << std::setprecision(10) << v;
  return out.str();
}


}  // namespace

Shape Shape::pointSet(std::vector<Eigen::Vector2d> pts, double strength) {
  Shape s;
  s.kind = ShapeKind::Points;
  s.points = std::move(pts);
  s.strength = strength;
  return s;
}

Shape Shape::rectangle(double x0, double y0, double x1, double y1, double strength) {
  Shape s;
  s.kind = ShapeKind::Rectangle;
  s.x0 = x0;
  s.y0 = y0;
  s.x1 = x1;
  s.y1 = y1;
  s.strength = strength;
  return s;
}

Shape Shape::disk(Eigen::Vector2d center, double radius, double strength) {
  Shape s;
  s.kind = ShapeKind::Disk;
  s.center = center;
  s.radius = radius;
  s.strength = strength;
  return s;
}

Shape Shape::horseshoe(Eigen::Vector2d center, double inner_radius, double outer_radius,
                       double gap_half_angle, double strength) {
  Shape s;
  s.kind = ShapeKind::Horseshoe;
  s.center = center;
  s.inner_radius = inner_radius;
  s.radius = outer_radius;
  s.gap_half_angle = gap_half_angle;
  s.strength = strength;
  return s;
}

Shape Shape::hollowRectangle(double x0, double y0, double x1, double y1, double thickness,
                             double strength) {
  Shape s = rectangle(x0, y0, x1, y1, strength);
  s.kind = ShapeKind::HollowRectangle;
  s.thickness = thickness;
  return s;
}

void validate(const SourceSpec& spec) {
  if (spec.shapes.empty()) throw std::invalid_argument("source: no shapes");
  for (const Shape& shape : spec.shapes) {
    if (!(shape.strength > 0.0) || !std::isfinite(shape.strength))
      throw std::invalid_argument("source: strengths must be positive");
    switch (shape.kind) {
      case ShapeKind::Points:
        if (shape.points.empty()) throw std::invalid_argument("source: empty point set");
        for (const auto& p : shape.points)
          if (!insideUnitSquare(p.x(), p.y()))
            throw std::invalid_argument("source: point outside the unit square");
        break;
      case ShapeKind::Rectangle:
      case ShapeKind::HollowRectangle:
        if (!(shape.x0 <= shape.x1 && shape.y0 <= shape.y1) ||
            !insideUnitSquare(shape.x0, shape.y0) || !insideUnitSquare(shape.x1, shape.y1))
          throw std::invalid_argument("source: rectangle must satisfy 0 <= x0 <= x1 <= 1 and "
                                      "0 <= y0 <= y1 <= 1");
        if (shape.kind == ShapeKind::HollowRectangle && !(shape.thickness > 0.0))
          throw std::invalid_argument("source: frame thickness must be > 0");
        break;
      case ShapeKind::Disk:
      case ShapeKind::Horseshoe:
        if (!(shape.radius > 0.0) ||
            !insideUnitSquare(shape.center.x() - shape.radius, shape.center.y() - shape.radius) ||
            !insideUnitSquare(shape.center.x() + shape.radius, shape.center.y() + shape.radius))
          throw std::invalid_argument("source: disk or horseshoe leaves the unit square");
        if (shape.kind == ShapeKind::Horseshoe &&
            !(shape.inner_radius >= 0.0 && shape.inner_radius < shape.radius))
          throw std::invalid_argument("source: horseshoe needs 0 <= inner < outer radius");
        break;
    }
  }
}

Eigen::VectorXd rasterizeSource(const SourceSpec& spec, const TriMesh& mesh) {
  validate(spec);
  const int n = mesh.nodes_per_side;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(mesh.numNodes());
  for (const Shape& shape : spec.shapes) {
    if (shape.kind == ShapeKind::Points) {
      for (const auto& p : shape.points) {
        const int i = static_cast<int>(std::lround(p.x() * (n - 1)));
        const int j = static_cast<int>(std::lround(p.y() * (n - 1)));
        double& v = x[mesh.nodeIndex(i, j)];
        v = std::max(v, shape.strength);
      }
      continue;
    }
    for (int k = 0; k < mesh.numNodes(); ++k)
      if (contains(shape, mesh.node_coords[k])) x[k] = std::max(x[k], shape.strength);
  }
  if ((x.array() > 0.0).count() == 0)
    throw std::invalid_argument("source: no mesh node lies inside any shape");
  return x;
}

GeneratedData addNoise(const Eigen::VectorXd& clean, const NoiseSpec& noise) {
  if (!(noise.level >= 0.0)) throw std::invalid_argument("noise level must be >= 0");
  GeneratedData out;
  out.clean = clean;
  out.noisy = clean;
  if (noise.level == 0.0 || clean.size() == 0) return out;
  out.tau = noise.level * (clean.maxCoeff() - clean.minCoeff());
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index i = 0; i < clean.size(); ++i) out.noisy[i] += out.tau * normal(rng);
  return out;
}

Eigen::VectorXd restrictBoundaryData(const Eigen::VectorXd& fine_data, const TriMesh& fine,
                                     const TriMesh& coarse) {
  if (!isNestedRefinement(coarse, fine))
    throw std::invalid_argument("restrictBoundaryData: meshes are not nested");
  if (fine_data.size() != fine.numBoundaryNodes())
    throw std::invalid_argument("restrictBoundaryData: data length does not match fine mesh");
  std::unordered_map<int, int> fine_position;
  for (int k = 0; k < fine.numBoundaryNodes(); ++k) fine_position[fine.boundary_nodes[k]] = k;
  const Eigen::VectorXd mb_fine = assembleBoundaryMassDiagonal(fine);
  const Eigen::VectorXd mb_coarse = assembleBoundaryMassDiagonal(coarse);
  const int nc = coarse.nodes_per_side;
  Eigen::VectorXd out(coarse.numBoundaryNodes());
  for (int k = 0; k < out.size(); ++k) {
    const int node = coarse.boundary_nodes[k];
    const int i = node % nc;
    const int j = node / nc;
    const int pos = fine_position.at(fine.nodeIndex(2 * i, 2 * j));
    out[k] = fine_data[pos] * std::sqrt(mb_coarse[k] / mb_fine[pos]);
  }
  return out;
}

Eigen::VectorXd generateData(const SourceSpec& spec, const TriMesh& data_mesh,
                             const TriMesh& inverse_state_mesh, double epsilon) {
  const Eigen::VectorXd x_fine = rasterizeSource(spec, data_mesh);
  const Eigen::VectorXd b = applyForward(data_mesh, data_mesh, epsilon, x_fine);
  if (data_mesh.nodes_per_side == inverse_state_mesh.nodes_per_side) return b;
  return restrictBoundaryData(b, data_mesh, inverse_state_mesh);
}

std::vector<int> supportOf(const Eigen::VectorXd& x, double threshold) {
  std::vector<int> out;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x[i] > threshold) out.push_back(static_cast<int>(i));
  return out;
}

RecoveryReport computeMetrics(const Eigen::VectorXd& x, const Eigen::VectorXd& x_star,
                              double threshold_frac) {
  if (x.size() != x_star.size()) throw std::invalid_argument("computeMetrics: length mismatch");
  if (!(threshold_frac > 0.0 && threshold_frac < 1.0))
    throw std::invalid_argument("computeMetrics: threshold_frac must lie in (0, 1)");
  RecoveryReport r;
  const double top = x.size() ? x.maxCoeff() : 0.0;
  int hits = 0, found = 0, truth = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const bool in_x = top > 0.0 && x[i] > threshold_frac * top;
    const bool in_true = x_star[i] > 0.0;
    found += in_x;
    truth += in_true;
    hits += in_x && in_true;
  }
  r.support_size = found;
  r.true_support_size = truth;
  r.support_precision = found > 0 ? static_cast<double>(hits) / found : 1.0;
  r.support_recall = truth > 0 ? static_cast<double>(hits) / truth : 1.0;
  r.linf_error = x.size() ? (x - x_star).cwiseAbs().maxCoeff() : 0.0;
  r.l2_error = (x - x_star).norm();
  return r;
}

std::vector<std::string> exampleNames() { return {"ex1", "ex1mag", "ex2", "ex3", "ex4", "ex5"}; }

double referenceAlpha(const std::string& name, double noise_level) {
  if (noise_level <= 0.0 || (name != "ex4" && name != "ex5")) return 1e-4;
  const bool low = noise_level < 0.03;
  if (name == "ex4") return low ? 0.01 : 0.15;
  return low ? 0.05 : 0.2;
}

ExampleConfig exampleDefaults(const std::string& name) {
  ExampleConfig c;
  c.name = name;
  // Five point sources on the 17 x 17 source grid.
  const std::vector<Eigen::Vector2d> five = {{0.25, 0.25}, {0.75, 0.25}, {0.5, 0.5},
                                             {0.25, 0.75}, {0.75, 0.75}};
  // Example 1 is presented for the screened Poisson case, the rest for Helmholtz.
  c.epsilon = name == "ex1" || name == "ex1mag" ? 1.0 : -1.0;
  if (name == "ex1") {
    c.source.shapes = {Shape::pointSet(five)};
  } else if (name == "ex1mag") {
    const double strengths[] = {1.0, 0.5, 2.0, 1.5, 0.8};
    for (int k = 0; k < 5; ++k) c.source.shapes.push_back(Shape::pointSet({five[k]}, strengths[k]));
  } else if (name == "ex2") {
    c.source.shapes = {Shape::rectangle(0.24, 0.18, 0.32, 0.20),
                       Shape::rectangle(0.43, 0.80, 0.51, 0.88),
                       Shape::rectangle(0.62, 0.37, 0.82, 0.44)};
    c.strength_choice = StrengthChoice::Sweep;
    c.sweep_grid = uniformGrid(0.4, 1.4, 11);
  } else if (name == "ex3" || name == "ex4" || name == "ex5") {
    c.state_nodes = 49;
    c.source_nodes = 49;
    c.data_nodes = 97;
    if (name == "ex3") {
      c.source.shapes = {Shape::rectangle(0.15, 0.60, 0.35, 0.80),
                         Shape::rectangle(0.55, 0.65, 0.85, 0.78),
                         Shape::disk({0.5, 0.3}, 0.13)};
      c.strength_choice = StrengthChoice::Sweep;
      c.sweep_grid = uniformGrid(0.4, 1.6, 13);
    } else if (name == "ex4") {
      c.source.shapes = {Shape::horseshoe({0.5, 0.5}, 0.15, 0.3, std::numbers::pi / 4)};
      c.s = 1.0;
    } else {
      c.source.shapes = {Shape::hollowRectangle(0.25, 0.3, 0.75, 0.7, 0.1)};
      c.s = 1.0;
    }
  } else {
    throw std::invalid_argument("unknown example '" + name + "'");
  }
  return c;
}

Shape parseShape(const std::string& text) {
  std::istringstream in(text);
  std::string kind;
  in >> kind;
  std::vector<double> v;
  std::string token;
  while (in >> token) v.push_back(parseDouble("shape", token));
  auto need = [&](std::size_t count, const char* usage) {
    if (v.size() != count && v.size() != count + 1)
      throw std::invalid_argument(std::string("shape: expected ") + usage);
  };
  auto strength = [&](std::size_t count) { return v.size() > count ? v[count] : 1.0; };
  if (kind == "point") {
    need(2, "point X Y [STRENGTH]");
    return Shape::pointSet({{v[0], v[1]}}, strength(2));
  }
  if (kind == "rectangle") {
    need(4, "rectangle X0 Y0 X1 Y1 [STRENGTH]");
    return Shape::rectangle(v[0], v[1], v[2], v[3], strength(4));
  }
  if (kind == "disk") {
    need(3, "disk CX CY R [STRENGTH]");
    return Shape::disk({v[0], v[1]}, v[2], strength(3));
  }
  if (kind == "horseshoe") {
    need(5, "horseshoe CX CY R_INNER R_OUTER GAP_HALF_ANGLE [STRENGTH]");
    return Shape::horseshoe({v[0], v[1]}, v[2], v[3], v[4], strength(5));
  }
  if (kind == "hollow_rectangle") {
    need(5, "hollow_rectangle X0 Y0 X1 Y1 THICKNESS [STRENGTH]");
    return Shape::hollowRectangle(v[0], v[1], v[2], v[3], v[4], strength(5));
  }
  throw std::invalid_argument("shape: unknown kind '" + kind + "'");
}

void applyOverride(ExampleConfig& c, const std::string& key, const std::string& value) {
  if (key == "example") {
    c = exampleDefaults(value);
  } else if (key == "epsilon") {
    c.epsilon = parseDouble(key, value);
  } else if (key == "alpha") {
    c.alpha = parseDouble(key, value);
    if (!(c.alpha > 0.0)) throw std::invalid_argument("config: alpha must be > 0");
  } else if (key == "s") {
    if (value == "sweep") {
      c.strength_choice = StrengthChoice::Sweep;
    } else {
      c.s = parseDouble(key, value);
      if (!(c.s > 0.0)) throw std::invalid_argument("config: s must be > 0");
      c.strength_choice = StrengthChoice::Fixed;
    }
  } else if (key == "sweep") {
    // "MIN MAX POINTS"
    std::istringstream in(value);
    std::string a, b, n;
    in >> a >> b >> n;
    c.sweep_grid = uniformGrid(parseDouble(key, a), parseDouble(key, b), parseInt(key, n));
  } else if (key == "rank") {
    c.rank = parseInt(key, value);
  } else if (key == "iters") {
    c.iters = parseInt(key, value);
  } else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(parseInt(key, value));
  } else if (key == "noise_level") {
    c.noise_level = parseDouble(key, value);
    if (!(c.noise_level >= 0.0)) throw std::invalid_argument("config: noise_level must be >= 0");
  } else if (key == "morozov") {
    c.morozov = parseBool(key, value);
  } else if (key == "weights") {
    if (value != "model" && value != "identity")
      throw std::invalid_argument("config: weights must be 'model' or 'identity'");
    c.identity_weights = value == "identity";
  } else if (key == "mode") {
    if (value != "projected" && value != "direct")
      throw std::invalid_argument("config: mode must be 'projected' or 'direct'");
    c.mode = value == "direct" ? ObjectiveMode::Direct : ObjectiveMode::Projected;
  } else if (key == "state_nodes") {
    c.state_nodes = parseInt(key, value);
  } else if (key == "source_nodes") {
    c.source_nodes = parseInt(key, value);
  } else if (key == "data_nodes") {
    c.data_nodes = parseInt(key, value);
  } else if (key == "threshold_frac") {
    c.threshold_frac = parseDouble(key, value);
  } else if (key == "out_dir") {
    c.out_dir = value;
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

void applyConfigText(ExampleConfig& config, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool shapes_replaced = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "shape") {
      if (!shapes_replaced) config.source.shapes.clear();
      shapes_replaced = true;
      config.source.shapes.push_back(parseShape(value));
    } else {
      applyOverride(config, key, value);
    }
  }
}

void applyConfigFile(ExampleConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  applyConfigText(config, text.str());
}

ExampleOutcome runExample(const ExampleConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ExampleOutcome out;
  out.config = config;

  const TriMesh state = buildMesh(config.state_nodes);
  out.source_mesh = buildMesh(config.source_nodes);
  const ForwardModel model = buildForward(state, out.source_mesh, config.epsilon, config.rank);
  out.warnings = model.warnings;
  out.x_star = rasterizeSource(config.source, out.source_mesh);

  Eigen::VectorXd clean;
  if (config.data_nodes == config.state_nodes) {
    clean = model.A * out.x_star;
  } else {
    clean = generateData(config.source, buildMesh(config.data_nodes), state, config.epsilon);
  }
  const GeneratedData data = addNoise(clean, {config.noise_level, config.seed});
  out.b = data.noisy;
  out.tau = data.tau;

  RecoveryProblem problem(model, out.b);
  problem.alpha = config.alpha > 0.0 ? config.alpha : referenceAlpha(config.name, config.noise_level);
  problem.s = config.s;
  problem.max_iters = config.iters;
  problem.mode = config.mode;
  problem.record_history = false;
  if (config.identity_weights) problem.weights = Eigen::VectorXd::Ones(model.cols());

  if (config.morozov) {
    if (!(out.tau > 0.0)) throw std::invalid_argument("morozov selection needs noise_level > 0");
    out.morozov = morozovAlpha(problem, discrepancyLevel(out.tau, model.rows()));
    problem.alpha = out.morozov->alpha;
    if (!out.morozov->in_band) out.warnings.push_back("discrepancy band not reached");
  }
  if (config.strength_choice == StrengthChoice::Sweep) {
    const std::vector<double> grid =
        config.sweep_grid.empty() ? defaultStrengthGrid(problem) : config.sweep_grid;
    out.sweep = sweepStrength(problem, grid);
    problem.s = out.sweep->vertex.s;
    if (!out.sweep->vertex.confident) out.warnings.push_back("L-curve vertex has low confidence");
  }
  out.s_used = problem.s;
  out.alpha_used = problem.alpha;

  const AdmmResult result = solve(problem);
  out.x = result.x;
  out.converged = result.converged;
  out.iterations = result.iterations_run;
  if (!result.converged) out.warnings.push_back("ADMM reached the iteration limit");

  out.report = computeMetrics(out.x, out.x_star, config.threshold_frac);
  out.report.weighted_l1 = result.weighted_l1;
  out.report.misfit = result.data_misfit;
  out.report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.report.parameters = {
      {"example", config.name},
      {"epsilon", formatDouble(config.epsilon)},
      {"alpha", formatDouble(out.alpha_used)},
      {"s", formatDouble(out.s_used)},
      {"rank", std::to_string(model.rank())},
      {"iters", std::to_string(config.iters)},
      {"seed", std::to_string(config.seed)},
      {"noise_level", formatDouble(config.noise_level)},
      {"weights", config.identity_weights ? "identity" : "model"},
      {"grids", std::to_string(config.data_nodes) + "/" + std::to_string(config.state_nodes) +
                    "/" + std::to_string(config.source_nodes)},
  };

  if (!config.out_dir.empty()) out.artifacts = writeArtifacts(out);
  return out;
}

std::string formatReport(const RecoveryReport& r) {
  std::ostringstream o;
  o << std::setprecision(10);
  o << "support_precision = " << r.support_precision << '\n'
    << "support_recall = " << r.support_recall << '\n'
    << "support_size = " << r.support_size << '\n'
    << "true_support_size = " << r.true_support_size << '\n'
    << "linf_error = " << r.linf_error << '\n'
    << "l2_error = " << r.l2_error << '\n'
    << "weighted_l1 = " << r.weighted_l1 << '\n'
    << "misfit = " << r.misfit << '\n'
    << "runtime_seconds = " << r.runtime_seconds << '\n';
  for (const auto& [key, value] : r.parameters) o << key << " = " << value << '\n';
  return o.str();
}

std::vector<std::string> writeArtifacts(const ExampleOutcome& outcome) {
  namespace fs = std::filesystem;
  const fs::path dir(outcome.config.out_dir);
  fs::create_directories(dir);
  const std::string stem = outcome.config.name;
  std::vector<std::string> written;

  const std::string solution = (dir / (stem + "_solution")).string();
  exportHeatmap(outcome.x, outcome.source_mesh, solution);
  written.push_back(solution + ".csv");
  written.push_back(solution + ".pgm");
  const std::string truth = (dir / (stem + "_true")).string();
  exportHeatmap(outcome.x_star, outcome.source_mesh, truth);
  written.push_back(truth + ".csv");
  written.push_back(truth + ".pgm");
  const std::string data = (dir / (stem + "_data.csv")).string();
  writeVectorCsv(outcome.b, data, "b");
  written.push_back(data);
  if (outcome.sweep) {
    const std::string sweep = (dir / (stem + "_sweep.csv")).string();
    writeSweepCsv(*outcome.sweep, sweep);
    written.push_back(sweep);
  }
  const std::string report = (dir / (stem + "_report.txt")).string();
  std::ofstream out(report);
  if (!out) throw std::runtime_error("cannot write " + report);
  out << formatReport(outcome.report);
  out << "s_used = " << formatDouble(outcome.s_used) << '\n'
      << "converged = " << (outcome.converged ? "true" : "false") << '\n'
      << "iterations = " << outcome.iterations << '\n';
  if (outcome.morozov)
    out << "morozov_in_band = " << (outcome.morozov->in_band ? "true" : "false") << '\n';
  for (const auto& w : outcome.warnings) out << "warning = " << w << '\n';
  written.push_back(report);
  return written;
}

}  // namespace srcid
