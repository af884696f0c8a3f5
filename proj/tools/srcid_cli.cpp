// Command-line front end for source identification runs.
#include "srcid/admm.hpp"
#include "srcid/certificate.hpp"
#include "srcid/experiments.hpp"
#include "srcid/forward_model.hpp"
#include "srcid/io.hpp"
#include "srcid/strength_sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitError = 1;
constexpr int kExitDegenerate = 2;

/// Raised for infeasible or degenerate problems (exit code 2).
struct Degenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::optional<double> epsilon;
  std::optional<double> alpha;
  std::optional<std::string> s;
  std::optional<int> rank;
  std::optional<int> iters;
  std::optional<int> seed;
  std::optional<double> noise_level;
  std::string out_dir;
  std::string config;
};

struct ModelOptions {
  std::string model_path;
  int state_nodes = 33;
  int source_nodes = 17;
};

double parseStrength(const std::string& text) {
  if (text == "inf" || text == "infinity") return srcid::kUnbounded;
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size() || !(v > 0.0)) throw CLI::ValidationError("--s", "expected a positive number or inf");
  return v;
}

std::string outPath(const GlobalOptions& g, const std::string& name) {
  if (g.out_dir.empty()) return name;
  std::filesystem::create_directories(g.out_dir);
  return (std::filesystem::path(g.out_dir) / name).string();
}

srcid::ForwardModel obtainModel(const GlobalOptions& g, const ModelOptions& m) {
  if (!m.model_path.empty()) return srcid::loadModel(m.model_path);
  const srcid::TriMesh state = srcid::buildMesh(m.state_nodes);
  const srcid::TriMesh source = srcid::buildMesh(m.source_nodes);
  return srcid::buildForward(state, source, g.epsilon.value_or(-1.0),
                             g.rank.value_or(srcid::kDefaultSvdRank));
}

srcid::RecoveryProblem makeProblem(const GlobalOptions& g, const srcid::ForwardModel& model,
                                   const Eigen::VectorXd& b, bool identity_weights,
                                   const std::string& mode) {
  srcid::RecoveryProblem p(model, b);
  p.alpha = g.alpha.value_or(1e-4);
  if (g.s) p.s = parseStrength(*g.s);
  p.max_iters = g.iters.value_or(5000);
  p.mode = mode == "direct" ? srcid::ObjectiveMode::Direct : srcid::ObjectiveMode::Projected;
  if (identity_weights) p.weights = Eigen::VectorXd::Ones(model.cols());
  return p;
}

void addModelOptions(CLI::App* cmd, ModelOptions& m) {
  cmd->add_option("--model", m.model_path, "Forward model cache written by build-forward");
  cmd->add_option("--state-nodes", m.state_nodes, "Nodes per side of the state grid")->capture_default_str();
  cmd->add_option("--source-nodes", m.source_nodes, "Nodes per side of the source grid")->capture_default_str();
}

std::vector<int> parseIndexList(const std::string& text) {
  std::vector<int> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    out.push_back(std::stoi(token));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Source identification from boundary data with weighted l1 regularization"};
  app.require_subcommand(1);
  GlobalOptions g;
  auto global = [&](CLI::App* cmd) {
    cmd->add_option("--epsilon", g.epsilon, "Coefficient of the zeroth-order term");
    cmd->add_option("--alpha", g.alpha, "Regularization weight")->check(CLI::PositiveNumber);
    cmd->add_option("--s", g.s, "Upper bound on the source strength (number, inf, or sweep)");
    cmd->add_option("--rank", g.rank, "Truncated SVD rank")->check(CLI::PositiveNumber);
    cmd->add_option("--iters", g.iters, "Maximum ADMM iterations")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", g.seed, "Noise seed")->check(CLI::NonNegativeNumber);
    cmd->add_option("--noise-level", g.noise_level, "Noise level relative to the data range")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--out-dir", g.out_dir, "Directory for output files");
    cmd->add_option("--config", g.config, "key = value configuration file")->check(CLI::ExistingFile);
  };

  // build-forward
  ModelOptions bf_model;
  std::string bf_output = "model.bin";
  double weight_warning = srcid::kDefaultWeightWarning;
  auto* build = app.add_subcommand("build-forward", "Assemble the forward map and cache its SVD");
  global(build);
  addModelOptions(build, bf_model);
  build->add_option("--output", bf_output, "Cache file")->capture_default_str();
  build->add_option("--weight-warning", weight_warning, "Warn when a weight falls below this")
      ->capture_default_str();

  // recover
  ModelOptions rc_model;
  std::string rc_data, rc_output = "solution.csv", rc_trace, rc_mode = "projected";
  bool rc_identity = false;
  auto* recover = app.add_subcommand("recover", "Solve the regularized problem by ADMM");
  global(recover);
  addModelOptions(recover, rc_model);
  recover->add_option("--data", rc_data, "Boundary data CSV")->required()->check(CLI::ExistingFile);
  recover->add_option("--output", rc_output, "Solution CSV")->capture_default_str();
  recover->add_option("--trace", rc_trace, "Per-iteration residual CSV");
  recover->add_option("--mode", rc_mode, "projected or direct")
      ->check(CLI::IsMember({"projected", "direct"}))
      ->capture_default_str();
  recover->add_flag("--identity-weights", rc_identity, "Use W = I");

  // basis-pursuit
  ModelOptions bp_model;
  std::string bp_data, bp_output = "basis_pursuit.csv";
  auto* bp = app.add_subcommand("basis-pursuit", "Solve the weighted l1 LP exactly");
  global(bp);
  addModelOptions(bp, bp_model);
  bp->add_option("--data", bp_data, "Boundary data CSV")->required()->check(CLI::ExistingFile);
  bp->add_option("--output", bp_output, "Solution CSV")->capture_default_str();

  // certificate
  ModelOptions ct_model;
  std::string ct_support, ct_support_file;
  double ct_delta = srcid::kDefaultCertificateDelta;
  bool ct_optimize = false;
  auto* cert = app.add_subcommand("certificate", "Search for a support certificate");
  global(cert);
  addModelOptions(cert, ct_model);
  auto* support_opt = cert->add_option("--support", ct_support, "Comma-separated 0-based indices");
  cert->add_option("--support-file", ct_support_file, "Vector CSV; its positive entries form J")
      ->excludes(support_opt)
      ->check(CLI::ExistingFile);
  cert->add_option("--delta", ct_delta, "Margin")->check(CLI::PositiveNumber)->capture_default_str();
  cert->add_flag("--optimize", ct_optimize, "Maximize the total slack after feasibility");

  // sweep
  ModelOptions sw_model;
  std::string sw_data, sw_output = "sweep.csv";
  std::vector<double> sw_grid;
  auto* sweep = app.add_subcommand("sweep", "Sweep the strength bound and locate the L-curve vertex");
  global(sweep);
  addModelOptions(sweep, sw_model);
  sweep->add_option("--data", sw_data, "Boundary data CSV")->required()->check(CLI::ExistingFile);
  sweep->add_option("--grid", sw_grid, "MIN MAX POINTS")->expected(3);
  sweep->add_option("--output", sw_output, "Sweep CSV")->capture_default_str();

  // morozov
  ModelOptions mz_model;
  std::string mz_data;
  double mz_tau = 0.0;
  auto* morozov = app.add_subcommand("morozov", "Choose alpha by the discrepancy principle");
  global(morozov);
  addModelOptions(morozov, mz_model);
  morozov->add_option("--data", mz_data, "Boundary data CSV")->required()->check(CLI::ExistingFile);
  morozov->add_option("--tau", mz_tau, "Noise standard deviation")->required()->check(CLI::PositiveNumber);

  // example
  std::string ex_name;
  bool ex_identity = false, ex_morozov = false;
  auto* example = app.add_subcommand("example", "Run a bundled scenario");
  global(example);
  example->add_option("name", ex_name, "Scenario name")
      ->required()
      ->check(CLI::IsMember(srcid::exampleNames()));
  example->add_flag("--identity-weights", ex_identity, "Use W = I");
  example->add_flag("--morozov", ex_morozov, "Select alpha by the discrepancy principle");

  // metrics
  std::string mt_x, mt_truth;
  double mt_frac = srcid::kDefaultThresholdFrac;
  auto* metrics = app.add_subcommand("metrics", "Compare a solution with the true source");
  global(metrics);
  metrics->add_option("--x", mt_x, "Solution CSV")->required()->check(CLI::ExistingFile);
  metrics->add_option("--truth", mt_truth, "True source CSV")->required()->check(CLI::ExistingFile);
  metrics->add_option("--threshold-frac", mt_frac, "Support threshold relative to max(x)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors share the generic error code; --help still exits 0.
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    std::cout << std::setprecision(10);
    if (*build) {
      const srcid::ForwardModel model = obtainModel(g, bf_model);
      const std::string path = outPath(g, bf_output);
      srcid::saveModel(model, path);
      const srcid::WeightReport w = srcid::minWeightReport(model);
      std::cout << "rows = " << model.rows() << "\ncols = " << model.cols()
                << "\nrank = " << model.rank() << "\nsigma_max = " << model.sigma[0]
                << "\nsigma_min = " << model.sigma[model.rank() - 1]
                << "\ncondition_estimate = " << model.condition_estimate
                << "\nmin_weight = " << w.min_weight << "\nmin_weight_index = " << w.argmin
                << "\noutput = " << path << '\n';
      if (w.min_weight < weight_warning)
        std::cerr << "warning: weight " << w.min_weight << " at index " << w.argmin
                  << " is below " << weight_warning << '\n';
      for (const auto& msg : model.warnings) std::cerr << "warning: " << msg << '\n';
      return 0;
    }

    if (*recover) {
      const srcid::ForwardModel model = obtainModel(g, rc_model);
      srcid::RecoveryProblem p =
          makeProblem(g, model, srcid::readVectorCsv(rc_data), rc_identity, rc_mode);
      p.record_history = !rc_trace.empty();
      const srcid::AdmmResult r = srcid::solve(p);
      srcid::writeVectorCsv(r.x, outPath(g, rc_output), "x");
      if (!rc_trace.empty()) {
        std::ofstream trace(outPath(g, rc_trace));
        trace << std::setprecision(17) << "iteration,primal_residual,dual_residual,objective\n";
        for (std::size_t i = 0; i < r.primal_residual_history.size(); ++i)
          trace << i + 1 << ',' << r.primal_residual_history[i] << ','
                << r.dual_residual_history[i] << ',' << r.objective_history[i] << '\n';
      }
      std::cout << "iterations = " << r.iterations_run
                << "\nconverged = " << (r.converged ? "true" : "false")
                << "\nweighted_l1 = " << r.weighted_l1 << "\nmisfit = " << r.data_misfit << '\n';
      return 0;
    }

    if (*bp) {
      const srcid::ForwardModel model = obtainModel(g, bp_model);
      const double s = g.s ? parseStrength(*g.s) : srcid::kUnbounded;
      const srcid::BasisPursuitResult r =
          srcid::solveBasisPursuit(model, srcid::readVectorCsv(bp_data), s);
      std::cout << "status = " << srcid::toString(r.status) << '\n';
      if (r.status != srcid::LpStatus::Optimal) throw Degenerate("basis pursuit LP not solved");
      srcid::writeVectorCsv(r.x, outPath(g, bp_output), "x");
      std::cout << "weighted_l1 = " << r.weighted_l1 << '\n';
      return 0;
    }

    if (*cert) {
      const srcid::ForwardModel model = obtainModel(g, ct_model);
      std::vector<int> J;
      if (!ct_support_file.empty()) {
        const Eigen::VectorXd x = srcid::readVectorCsv(ct_support_file);
        J = srcid::supportOf(x, 0.0);
      } else {
        J = parseIndexList(ct_support);
      }
      srcid::CertificateOptions opts;
      opts.delta = ct_delta;
      opts.optimize = ct_optimize;
      const srcid::CertificateReport r = srcid::checkCertificate(model, J, opts);
      nlohmann::json j;
      j["feasible"] = r.feasible;
      j["status"] = r.feasible ? "certificate found" : "certificate not found";
      j["delta"] = r.delta;
      j["J"] = r.J;
      j["low_weight_indices"] = r.low_weight_indices;
      if (r.feasible) {
        j["gamma_hat"] = r.gamma_hat;
        j["c"] = std::vector<double>(r.c.data(), r.c.data() + r.c.size());
      }
      std::cout << j.dump(2) << '\n';
      return r.feasible ? 0 : kExitDegenerate;
    }

    if (*sweep) {
      const srcid::ForwardModel model = obtainModel(g, sw_model);
      const srcid::RecoveryProblem p =
          makeProblem(g, model, srcid::readVectorCsv(sw_data), false, "projected");
      const std::vector<double> grid =
          sw_grid.empty() ? srcid::defaultStrengthGrid(p)
                          : srcid::uniformGrid(sw_grid[0], sw_grid[1], static_cast<int>(sw_grid[2]));
      const srcid::SweepResult r = srcid::sweepStrength(p, grid);
      srcid::writeSweepCsv(r, outPath(g, sw_output));
      srcid::writeSweepCsv(r, std::cout);
      return 0;
    }

    if (*morozov) {
      const srcid::ForwardModel model = obtainModel(g, mz_model);
      const srcid::RecoveryProblem p =
          makeProblem(g, model, srcid::readVectorCsv(mz_data), false, "projected");
      const srcid::MorozovResult r = srcid::morozovAlpha(p, srcid::discrepancyLevel(mz_tau, model.rows()));
      std::cout << "alpha = " << r.alpha << "\nmisfit = " << r.misfit << "\neta = " << r.eta
                << "\nin_band = " << (r.in_band ? "true" : "false")
                << "\nmonotone = " << (r.monotone ? "true" : "false")
                << "\nevaluations = " << r.evaluations << '\n';
      return r.in_band ? 0 : kExitDegenerate;
    }

    if (*example) {
      srcid::ExampleConfig c = srcid::exampleDefaults(ex_name);
      if (!g.config.empty()) srcid::applyConfigFile(c, g.config);
      if (g.epsilon) c.epsilon = *g.epsilon;
      if (g.alpha) c.alpha = *g.alpha;
      if (g.s) srcid::applyOverride(c, "s", *g.s);
      if (g.rank) c.rank = *g.rank;
      if (g.iters) c.iters = *g.iters;
      if (g.seed) c.seed = static_cast<std::uint64_t>(*g.seed);
      if (g.noise_level) c.noise_level = *g.noise_level;
      if (!g.out_dir.empty()) c.out_dir = g.out_dir;
      if (ex_identity) c.identity_weights = true;
      if (ex_morozov) c.morozov = true;
      const srcid::ExampleOutcome out = srcid::runExample(c);
      std::cout << srcid::formatReport(out.report) << "s_used = " << out.s_used
                << "\nconverged = " << (out.converged ? "true" : "false")
                << "\niterations = " << out.iterations << '\n';
      if (out.sweep)
        std::cout << "vertex_s = " << out.sweep->vertex.s
                  << "\nvertex_confident = " << (out.sweep->vertex.confident ? "true" : "false")
                  << '\n';
      for (const auto& a : out.artifacts) std::cout << "artifact = " << a << '\n';
      for (const auto& w : out.warnings) std::cerr << "warning: " << w << '\n';
      return 0;
    }

    if (*metrics) {
      const srcid::RecoveryReport r = srcid::computeMetrics(
          srcid::readVectorCsv(mt_x), srcid::readVectorCsv(mt_truth), mt_frac);
      std::cout << srcid::formatReport(r);
      return 0;
    }
  } catch (const Degenerate& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const srcid::SingularOperatorError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
