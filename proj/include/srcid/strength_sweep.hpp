// Strength identification by sweeping the box bound s, and regularization
// parameter choice by the discrepancy principle.
#ifndef SRCID_STRENGTH_SWEEP_HPP
#define SRCID_STRENGTH_SWEEP_HPP

#include "srcid/admm.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace srcid {

struct VertexEstimate {
  double s = 0.0;
  int index = -1;
  bool confident = false;
  double max_second_difference = 0.0;
  double median_second_difference = 0.0;
};

struct SweepResult {
  std::vector<double> s_grid;
  std::vector<double> g_values;     // ||W y(s)||_1
  std::vector<double> derivative;   // entry i is the slope between s_{i-1} and s_i; NaN at i = 0
  std::vector<char> converged;
  std::vector<int> iterations;
  std::vector<Eigen::VectorXd> solutions;  // empty unless kept
  VertexEstimate vertex;

  bool nonIncreasing(double relative_tol = 1e-3) const;
};

struct SweepOptions {
  bool warm_start = true;
  bool keep_solutions = true;
};

/// 26 points uniform on [0.1 h, 2 h] with h = ||A^+ b||_inf.
std::vector<double> defaultStrengthGrid(const RecoveryProblem& problem, int points = 26);

/// Uniform grid from `first` to `last` inclusive.
std::vector<double> uniformGrid(double first, double last, int points);

/// Solves the problem template once per s. Solves run in descending s, each
/// warm-started from the previous one when enabled. Throws
/// std::invalid_argument unless the grid is nonempty, positive and strictly
/// increasing.
SweepResult sweepStrength(const RecoveryProblem& problem, const std::vector<double>& s_grid,
                          const SweepOptions& options = {});

/// Grid point with the largest absolute change of slope; ties go to the
/// larger s. Low confidence when that change is below twice the median.
/// Throws std::invalid_argument for fewer than 3 points.
VertexEstimate detectVertex(const std::vector<double>& s_grid, const std::vector<double>& g_values);

/// CSV with columns s,g,derivative,converged and a trailing vertex record.
void writeSweepCsv(const SweepResult& sweep, std::ostream& out);
void writeSweepCsv(const SweepResult& sweep, const std::string& path);

struct MorozovOptions {
  double alpha_min = 1e-8;
  double alpha_max = 1e2;
  double band_low = 0.9;
  double band_high = 1.1;
  int max_bisections = 60;
  // Stop once the bracket spans less than this in log(alpha).
  double log_tolerance = 0.02;
};

struct MorozovResult {
  double alpha = 0.0;
  double misfit = 0.0;
  double eta = 0.0;
  bool in_band = false;   // false: the band was not reached, alpha is a bracket endpoint or best candidate
  bool monotone = true;   // misfit never decreased as alpha grew
  int evaluations = 0;
  Eigen::VectorXd x;
};

/// Bisection on log(alpha) for the largest alpha whose misfit
/// ||A y(alpha) - b||_2 lies in [band_low eta, band_high eta].
MorozovResult morozovAlpha(const RecoveryProblem& problem, double eta,
                           const MorozovOptions& options = {});

/// eta = tau sqrt(m) for Gaussian noise of standard deviation tau.
double discrepancyLevel(double tau, int m);

}  // namespace srcid

#endif  // SRCID_STRENGTH_SWEEP_HPP
