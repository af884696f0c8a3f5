#include "srcid/experiments.hpp"
#include "srcid/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace srcid;
namespace fs = std::filesystem;

namespace {

fs::path scratchDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("srcid_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST(Rasterize, FivePointSources) {
  const TriMesh mesh = buildMesh(17);
  const ExampleConfig c = exampleDefaults("ex1");
  const Eigen::VectorXd x = rasterizeSource(c.source, mesh);
  EXPECT_EQ((x.array() > 0.0).count(), 5);
  EXPECT_EQ(x.maxCoeff(), 1.0);
  EXPECT_EQ(x[mesh.nodeIndex(8, 8)], 1.0);
  EXPECT_EQ(x[mesh.nodeIndex(4, 12)], 1.0);
}

TEST(Rasterize, PointsSnapToNearestNode) {
  const TriMesh mesh = buildMesh(5);  // spacing 0.25
  SourceSpec spec{{Shape::pointSet({{0.3, 0.7}}, 2.0)}};
  const Eigen::VectorXd x = rasterizeSource(spec, mesh);
  EXPECT_EQ(x[mesh.nodeIndex(1, 3)], 2.0);
  EXPECT_EQ((x.array() > 0.0).count(), 1);
}

TEST(Rasterize, WholeDomainRectangle) {
  const TriMesh mesh = buildMesh(9);
  const Eigen::VectorXd x = rasterizeSource({{Shape::rectangle(0, 0, 1, 1)}}, mesh);
  EXPECT_TRUE((x.array() == 1.0).all());
}

TEST(Rasterize, DiskNodeCount) {
  const TriMesh mesh = buildMesh(97);
  const double r = 0.2;
  const Eigen::VectorXd x = rasterizeSource({{Shape::disk({0.5, 0.5}, r)}}, mesh);
  const double expected = std::numbers::pi * r * r / (mesh.spacing() * mesh.spacing());
  EXPECT_NEAR((x.array() > 0.0).count(), expected, 0.15 * expected);
}

TEST(Rasterize, OverlapTakesLargerStrength) {
  const TriMesh mesh = buildMesh(9);
  SourceSpec spec{{Shape::rectangle(0.0, 0.0, 0.5, 0.5, 1.0), Shape::rectangle(0.25, 0.25, 0.75, 0.75, 3.0)}};
  const Eigen::VectorXd x = rasterizeSource(spec, mesh);
  EXPECT_EQ(x[mesh.nodeIndex(1, 1)], 1.0);
  EXPECT_EQ(x[mesh.nodeIndex(3, 3)], 3.0);
}

TEST(Rasterize, HorseshoeAndFrame) {
  const TriMesh mesh = buildMesh(49);
  const Eigen::VectorXd hs = rasterizeSource(exampleDefaults("ex4").source, mesh);
  // Centre hole and the gap below the centre are empty; the top arm is not.
  EXPECT_EQ(hs[mesh.nodeIndex(24, 24)], 0.0);
  EXPECT_EQ(hs[mesh.nodeIndex(24, 13)], 0.0);
  EXPECT_EQ(hs[mesh.nodeIndex(24, 35)], 1.0);
  const Eigen::VectorXd fr = rasterizeSource(exampleDefaults("ex5").source, mesh);
  EXPECT_EQ(fr[mesh.nodeIndex(24, 24)], 0.0);
  EXPECT_EQ(fr[mesh.nodeIndex(12, 24)], 1.0);
}

TEST(Rasterize, Validation) {
  const TriMesh mesh = buildMesh(5);
  EXPECT_THROW(rasterizeSource({{Shape::rectangle(0.1, 0.1, 0.2, 0.2)}}, mesh), std::invalid_argument);
  EXPECT_THROW(validate(SourceSpec{{Shape::rectangle(0.5, 0.5, 1.5, 0.7)}}), std::invalid_argument);
  EXPECT_THROW(validate(SourceSpec{{Shape::disk({0.5, 0.5}, 0.1, -1.0)}}), std::invalid_argument);
  EXPECT_THROW(validate(SourceSpec{}), std::invalid_argument);
}

TEST(Noise, ZeroLevelIsExact) {
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(20, 0.0, 1.0);
  const GeneratedData d = addNoise(b, {0.0, 5});
  EXPECT_TRUE((d.noisy.array() == b.array()).all());
  EXPECT_EQ(d.tau, 0.0);
}

TEST(Noise, DeterministicAndCalibrated) {
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(20000, -1.0, 3.0);
  const GeneratedData a = addNoise(b, {0.01, 42});
  const GeneratedData c = addNoise(b, {0.01, 42});
  EXPECT_TRUE((a.noisy.array() == c.noisy.array()).all());
  EXPECT_NEAR(a.tau, 0.04, 1e-15);
  const Eigen::VectorXd e = a.noisy - b;
  const double sd = std::sqrt(e.squaredNorm() / e.size());
  EXPECT_NEAR(sd / (b.maxCoeff() - b.minCoeff()), 0.01, 5e-4);
  EXPECT_FALSE((addNoise(b, {0.01, 43}).noisy.array() == a.noisy.array()).all());
}

TEST(Restriction, SamplesSharedNodesWithMassRescale) {
  const TriMesh fine = buildMesh(9);
  const TriMesh coarse = buildMesh(5);
  Eigen::VectorXd data(fine.numBoundaryNodes());
  for (int k = 0; k < data.size(); ++k) {
    const auto& p = fine.node_coords[fine.boundary_nodes[k]];
    data[k] = p.x() + 10.0 * p.y();
  }
  const Eigen::VectorXd out = restrictBoundaryData(data, fine, coarse);
  ASSERT_EQ(out.size(), coarse.numBoundaryNodes());
  for (int k = 0; k < out.size(); ++k) {
    const auto& p = coarse.node_coords[coarse.boundary_nodes[k]];
    EXPECT_NEAR(out[k], std::sqrt(2.0) * (p.x() + 10.0 * p.y()), 1e-12);
  }
  EXPECT_THROW(restrictBoundaryData(data, fine, buildMesh(4)), std::invalid_argument);
}

TEST(GenerateData, SameGridMatchesModel) {
  const TriMesh mesh = buildMesh(17);
  const ForwardModel model = buildForward(mesh, mesh, -1.0);
  const SourceSpec spec{{Shape::rectangle(0.2, 0.2, 0.4, 0.5)}};
  const Eigen::VectorXd b = generateData(spec, mesh, mesh, -1.0);
  const Eigen::VectorXd ref = model.A * rasterizeSource(spec, mesh);
  EXPECT_LT((b - ref).cwiseAbs().maxCoeff(), 1e-12 * ref.cwiseAbs().maxCoeff());
}

TEST(GenerateData, FineGridCloseToCoarseModel) {
  // A constant source has the same interpolant on both grids, so only the
  // discretization of the state differs.
  const TriMesh coarse = buildMesh(17);
  const TriMesh fine = buildMesh(33);
  const SourceSpec spec{{Shape::rectangle(0.0, 0.0, 1.0, 1.0)}};
  const Eigen::VectorXd crime = generateData(spec, coarse, coarse, -1.0);
  const Eigen::VectorXd free = generateData(spec, fine, coarse, -1.0);
  const double rel = (free - crime).norm() / crime.norm();
  EXPECT_GT(rel, 0.0);
  EXPECT_LT(rel, 0.05);
}

TEST(Metrics, Conventions) {
  Eigen::VectorXd x_star(5);
  x_star << 1, 1, 0, 0, 1;
  RecoveryReport same = computeMetrics(x_star, x_star);
  EXPECT_EQ(same.support_precision, 1.0);
  EXPECT_EQ(same.support_recall, 1.0);
  EXPECT_EQ(same.linf_error, 0.0);
  EXPECT_EQ(same.l2_error, 0.0);

  const RecoveryReport zero = computeMetrics(Eigen::VectorXd::Zero(5), x_star);
  EXPECT_EQ(zero.support_precision, 1.0);
  EXPECT_EQ(zero.support_recall, 0.0);

  Eigen::VectorXd sub(5);
  sub << 2, 0, 0, 0, 0.05;  // 0.05 is below 10% of the max
  const RecoveryReport part = computeMetrics(sub, x_star);
  EXPECT_EQ(part.support_precision, 1.0);
  EXPECT_NEAR(part.support_recall, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(part.support_size, 1);
  EXPECT_EQ(part.true_support_size, 3);
  EXPECT_NEAR(part.linf_error, 1.0, 1e-15);

  EXPECT_THROW(computeMetrics(sub, Eigen::VectorXd::Zero(3)), std::invalid_argument);
  EXPECT_EQ(supportOf(sub, 1e-3), (std::vector<int>{0, 4}));
}

TEST(Heatmap, CsvRoundTripIsBitwise) {
  const fs::path dir = scratchDir("csv");
  const TriMesh mesh = buildMesh(5);
  Eigen::VectorXd x(25);
  for (int i = 0; i < 25; ++i) x[i] = std::sqrt(i + 0.1) / 3.0 + 1e-17 * i;
  exportHeatmap(x, mesh, (dir / "field").string());
  const Eigen::VectorXd back = readVectorCsv((dir / "field.csv").string());
  ASSERT_EQ(back.size(), 25);
  EXPECT_TRUE((back.array() == x.array()).all());
  const std::string csv = slurp(dir / "field.csv");
  EXPECT_EQ(csv.rfind("node_index,x_coord,y_coord,value\n", 0), 0u);

  writeVectorCsv(x, (dir / "plain.csv").string());
  EXPECT_TRUE((readVectorCsv((dir / "plain.csv").string()).array() == x.array()).all());
}

TEST(Heatmap, ZeroFieldIsBlack) {
  const fs::path dir = scratchDir("black");
  const TriMesh mesh = buildMesh(4);
  writeHeatmapPgm(Eigen::VectorXd::Zero(16), mesh, (dir / "z.pgm").string());
  const std::string pgm = slurp(dir / "z.pgm");
  const std::string header = "P5\n4 4\n255\n";
  ASSERT_EQ(pgm.substr(0, header.size()), header);
  ASSERT_EQ(pgm.size(), header.size() + 16);
  for (std::size_t i = header.size(); i < pgm.size(); ++i) EXPECT_EQ(pgm[i], '\0');
}

TEST(Heatmap, SingleNodeIsSingleWhitePixel) {
  const fs::path dir = scratchDir("white");
  const TriMesh mesh = buildMesh(4);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(16);
  x[mesh.nodeIndex(1, 3)] = 0.7;  // top row, second column
  writeHeatmapPgm(x, mesh, (dir / "w.pgm").string());
  const std::string pgm = slurp(dir / "w.pgm");
  const std::size_t offset = std::string("P5\n4 4\n255\n").size();
  for (int p = 0; p < 16; ++p)
    EXPECT_EQ(static_cast<unsigned char>(pgm[offset + p]), p == 1 ? 255 : 0) << p;
}

TEST(Config, ExampleDefaults) {
  for (const std::string& name : exampleNames()) {
    const ExampleConfig c = exampleDefaults(name);
    EXPECT_EQ(c.name, name);
    EXPECT_NO_THROW(validate(c.source));
  }
  EXPECT_EQ(exampleDefaults("ex3").data_nodes, 97);
  EXPECT_EQ(exampleDefaults("ex3").state_nodes, 49);
  EXPECT_EQ(exampleDefaults("ex2").strength_choice, StrengthChoice::Sweep);
  EXPECT_THROW(exampleDefaults("ex9"), std::invalid_argument);
  EXPECT_EQ(referenceAlpha("ex1", 0.0), 1e-4);
  EXPECT_EQ(referenceAlpha("ex4", 0.01), 0.01);
  EXPECT_EQ(referenceAlpha("ex4", 0.05), 0.15);
  EXPECT_EQ(referenceAlpha("ex5", 0.01), 0.05);
  EXPECT_EQ(referenceAlpha("ex5", 0.05), 0.2);
}

TEST(Config, TextOverrides) {
  ExampleConfig c = exampleDefaults("ex1");
  applyConfigText(c,
                  "# scenario\n"
                  "alpha = 1e-3\n"
                  "s = 2.5   # fixed bound\n"
                  "noise_level = 0.01\n"
                  "weights = identity\n"
                  "mode = direct\n"
                  "shape = rectangle 0.2 0.2 0.4 0.4 2\n"
                  "shape = disk 0.7 0.7 0.1\n");
  EXPECT_EQ(c.alpha, 1e-3);
  EXPECT_EQ(c.s, 2.5);
  EXPECT_EQ(c.noise_level, 0.01);
  EXPECT_TRUE(c.identity_weights);
  EXPECT_EQ(c.mode, ObjectiveMode::Direct);
  ASSERT_EQ(c.source.shapes.size(), 2u);
  EXPECT_EQ(c.source.shapes[0].kind, ShapeKind::Rectangle);
  EXPECT_EQ(c.source.shapes[0].strength, 2.0);
  EXPECT_EQ(c.source.shapes[1].kind, ShapeKind::Disk);

  applyConfigText(c, "s = sweep\nsweep = 0.5 1.5 3\n");
  EXPECT_EQ(c.strength_choice, StrengthChoice::Sweep);
  EXPECT_EQ(c.sweep_grid, (std::vector<double>{0.5, 1.0, 1.5}));

  EXPECT_THROW(applyConfigText(c, "colour = red\n"), std::invalid_argument);
  EXPECT_THROW(applyConfigText(c, "alpha 3\n"), std::invalid_argument);
  EXPECT_THROW(applyConfigText(c, "alpha = -1\n"), std::invalid_argument);
  EXPECT_THROW(parseShape("triangle 0 0 1"), std::invalid_argument);
  EXPECT_THROW(parseShape("disk 0.5 0.5"), std::invalid_argument);
  EXPECT_EQ(parseShape("point 0.1 0.2 3").strength, 3.0);
}

TEST(RunExample, PointSourcesWithArtifacts) {
  const fs::path dir = scratchDir("ex1");
  ExampleConfig c = exampleDefaults("ex1");
  c.out_dir = dir.string();
  const ExampleOutcome out = runExample(c);
  EXPECT_EQ(out.report.support_precision, 1.0);
  EXPECT_EQ(out.report.support_recall, 1.0);
  EXPECT_LT(out.report.linf_error, 1e-2);
  EXPECT_EQ(supportOf(out.x, 1e-3), supportOf(out.x_star, 0.0));
  for (const std::string& f : {"ex1_solution.csv", "ex1_solution.pgm", "ex1_true.csv", "ex1_report.txt"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  const std::string report = slurp(dir / "ex1_report.txt");
  EXPECT_NE(report.find("support_precision"), std::string::npos);

  // Identical configurations give identical artifacts.
  const std::string first = slurp(dir / "ex1_solution.csv");
  runExample(c);
  EXPECT_EQ(slurp(dir / "ex1_solution.csv"), first);
}

TEST(RunExample, VaryingMagnitudes) {
  const ExampleOutcome out = runExample(exampleDefaults("ex1mag"));
  EXPECT_LE(out.report.linf_error, 1e-2);
}

TEST(RunExample, EpsilonSignBarelyMatters) {
  ExampleConfig plus = exampleDefaults("ex1");
  plus.epsilon = 1.0;
  ExampleConfig minus = plus;
  minus.epsilon = -1.0;
  const ExampleOutcome a = runExample(plus);
  const ExampleOutcome b = runExample(minus);
  EXPECT_EQ(supportOf(a.x, 1e-3), supportOf(b.x, 1e-3));
  EXPECT_LT((a.x - b.x).cwiseAbs().maxCoeff(), 5e-2);
}

TEST(RunExample, MorozovNeedsNoise) {
  ExampleConfig c = exampleDefaults("ex1");
  c.morozov = true;
  EXPECT_THROW(runExample(c), std::invalid_argument);
}
