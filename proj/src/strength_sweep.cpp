#include "srcid/strength_sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

namespace srcid {

bool SweepResult::nonIncreasing(double relative_tol) const {
  if (g_values.empty()) return true;
  const double tol = relative_tol * std::abs(g_values.front());
  for (std::size_t i = 1; i < g_values.size(); ++i)
    if (g_values[i] > g_values[i - 1] + tol) return false;
  return true;
}

std::vector<double> uniformGrid(double first, double last, int points) {
  if (points < 1) throw std::invalid_argument("uniformGrid: need at least one point");
  std::vector<double> grid(points, first);
  for (int i = 1; i < points; ++i) grid[i] = first + (last - first) * i / (points - 1);
  return grid;
}

std::vector<double> defaultStrengthGrid(const RecoveryProblem& problem, int points) {
  validate(problem);
  const double h = projectedTarget(problem).cwiseAbs().maxCoeff();
  if (!(h > 0.0)) throw std::invalid_argument("defaultStrengthGrid: A^+ b vanishes");
  return uniformGrid(0.1 * h, 2.0 * h, points);
}

VertexEstimate detectVertex(const std::vector<double>& s, const std::vector<double>& g) {
  if (s.size() != g.size()) throw std::invalid_argument("detectVertex: length mismatch");
  if (s.size() < 3) throw std::invalid_argument("detectVertex: need at least 3 grid points");
  const std::size_t n = s.size();
  std::vector<double> change(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double left = (g[i] - g[i - 1]) / (s[i] - s[i - 1]);
    const double right = (g[i + 1] - g[i]) / (s[i + 1] - s[i]);
    change[i - 1] = std::abs(right - left);
  }
  VertexEstimate v;
  std::size_t best = 0;
  for (std::size_t i = 1; i < change.size(); ++i)
    if (change[i] >= change[best]) best = i;
  v.index = static_cast<int>(best + 1);
  v.s = s[best + 1];
  v.max_second_difference = change[best];
  std::vector<double> sorted = change;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  v.median_second_difference =
      sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  v.confident = v.max_second_difference >= 2.0 * v.median_second_difference &&
                v.max_second_difference > 0.0;
  return v;
}

SweepResult sweepStrength(const RecoveryProblem& problem, const std::vector<double>& s_grid,
                          const SweepOptions& options) {
  validate(problem);
  if (s_grid.empty()) throw std::invalid_argument("sweepStrength: empty grid");
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (!(s_grid[i] > 0.0)) throw std::invalid_argument("sweepStrength: grid must be positive");
    if (i > 0 && !(s_grid[i] > s_grid[i - 1]))
      throw std::invalid_argument("sweepStrength: grid must be strictly increasing");
  }

  const std::size_t n = s_grid.size();
  SweepResult out;
  out.s_grid = s_grid;
  out.g_values.assign(n, 0.0);
  out.converged.assign(n, 0);
  out.iterations.assign(n, 0);
  if (options.keep_solutions) out.solutions.resize(n);

  RecoveryProblem local = problem;
  local.record_history = false;
  AdmmState state;
  bool have_state = false;
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = n - 1 - r;
    local.s = s_grid[i];
    AdmmResult res = solve(local, options.warm_start && have_state ? &state : nullptr);
    out.g_values[i] = res.weighted_l1;
    out.converged[i] = res.converged;
    out.iterations[i] = res.iterations_run;
    if (options.keep_solutions) out.solutions[i] = res.x;
    state = std::move(res.final_state);
    have_state = true;
  }

  out.derivative.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i < n; ++i)
    out.derivative[i] = (out.g_values[i] - out.g_values[i - 1]) / (s_grid[i] - s_grid[i - 1]);
  if (n >= 3) out.vertex = detectVertex(out.s_grid, out.g_values);
  return out;
}

void writeSweepCsv(const SweepResult& sweep, std::ostream& out) {
  out << std::setprecision(17);
  out << "s,g,derivative,converged\n";
  for (std::size_t i = 0; i < sweep.s_grid.size(); ++i) {
    out << sweep.s_grid[i] << ',' << sweep.g_values[i] << ',';
    if (i < sweep.derivative.size() && std::isfinite(sweep.derivative[i])) out << sweep.derivative[i];
    out << ',' << (sweep.converged[i] ? 1 : 0) << '\n';
  }
  out << "# vertex_s=" << sweep.vertex.s << ",confident=" << (sweep.vertex.confident ? 1 : 0)
      << '\n';
}

void writeSweepCsv(const SweepResult& sweep, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  writeSweepCsv(sweep, file);
  if (!file) throw std::runtime_error("write failed: " + path);
}

double discrepancyLevel(double tau, int m) {
  if (tau < 0.0 || m < 1) throw std::invalid_argument("discrepancyLevel: bad arguments");
  return tau * std::sqrt(static_cast<double>(m));
}

MorozovResult morozovAlpha(const RecoveryProblem& problem, double eta,
                           const MorozovOptions& options) {
  validate(problem);
  if (!(eta > 0.0)) throw std::invalid_argument("morozovAlpha: noise level must be > 0");
  if (!(options.alpha_min > 0.0) || !(options.alpha_max > options.alpha_min))
    throw std::invalid_argument("morozovAlpha: bad alpha bracket");

  const double low = options.band_low * eta;
  const double high = options.band_high * eta;
  RecoveryProblem local = problem;
  local.record_history = false;

  MorozovResult out;
  out.eta = eta;
  std::map<double, double> seen;  // alpha -> misfit
  double best_gap = std::numeric_limits<double>::infinity();
  Eigen::VectorXd last_x;

  auto evaluate = [&](double alpha) {
    local.alpha = alpha;
    AdmmResult res = solve(local);
    ++out.evaluations;
    seen[alpha] = res.data_misfit;
    last_x = res.x;
    const double gap = std::abs(std::log(res.data_misfit / eta));
    if (gap < best_gap) {
      best_gap = gap;
      out.alpha = alpha;
      out.misfit = res.data_misfit;
      out.x = res.x;
    }
    return res.data_misfit;
  };
  auto inBand = [&](double alpha, double misfit) {
    if (misfit < low || misfit > high) return false;
    out.alpha = alpha;
    out.misfit = misfit;
    out.x = last_x;
    return true;
  };
  auto finish = [&](bool in_band) {
    out.in_band = in_band;
    double previous = -1.0;
    for (const auto& [alpha, misfit] : seen) {
      if (misfit < previous * (1.0 - 1e-6)) out.monotone = false;
      previous = std::max(previous, misfit);
    }
    return out;
  };

  // Misfit grows with alpha. Among in-band values the largest alpha is
  // taken: bisection keeps misfit(lo) <= high < misfit(hi).
  const double misfit_hi = evaluate(options.alpha_max);
  if (inBand(options.alpha_max, misfit_hi)) return finish(true);
  if (misfit_hi < low) return finish(false);
  const double misfit_lo = evaluate(options.alpha_min);
  if (misfit_lo > high) return finish(false);
  double lo = std::log(options.alpha_min);
  double hi = std::log(options.alpha_max);
  double lo_misfit = misfit_lo;
  Eigen::VectorXd lo_x = last_x;
  for (int it = 0; it < options.max_bisections && hi - lo > options.log_tolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double misfit = evaluate(std::exp(mid));
    if (misfit <= high) {
      lo = mid;
      lo_misfit = misfit;
      lo_x = last_x;
    } else {
      hi = mid;
    }
  }
  last_x = lo_x;
  if (inBand(std::exp(lo), lo_misfit)) return finish(true);
  return finish(false);
}

}  // namespace srcid
